//! Matrix polynomials and the polynomial objects of the interpolation problem.
//!
//! The four polynomials `π, ρ, σ, τ` generate every solution through a
//! linear-fractional transformation. Three constructions are provided:
//! pseudoinverse based (valid for degenerate data), inverse based (strict data
//! only) and the order-by-order recursion. The `2m × 2m` resolvent matrices and
//! their degree-one factors are built from the strict construction.
//! Blaschke-Potapov elementary factors live here as rational functions.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matkernel::{
    block, block2x2, c, hermitian_part, identity, inverse, max_abs, min_eigenvalue, pinv, zeros,
    CMatrix, SignatureMatrix, Tolerances,
};
use crate::sequence::PotapovSeq;
use crate::solve::{Orientation, RationalMatrixFn};

/// Matrix polynomial `C_0 + C_1 w + ... + C_d w^d` with `p × q` coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPoly {
    coeffs: Vec<CMatrix>,
    rows: usize,
    cols: usize,
    formal_degree: Option<usize>,
}

impl MatrixPoly {
    /// Polynomial from a nonempty list of equally sized coefficients.
    pub fn new(coeffs: Vec<CMatrix>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::DimensionMismatch("polynomial needs a coefficient".into()))?;
        let (rows, cols) = first.shape();
        if coeffs.iter().any(|c| c.shape() != (rows, cols)) {
            return Err(Error::DimensionMismatch(
                "coefficients differ in size".into(),
            ));
        }
        Ok(MatrixPoly {
            coeffs,
            rows,
            cols,
            formal_degree: None,
        })
    }

    fn from_vec(coeffs: Vec<CMatrix>) -> Self {
        Self::new(coeffs).expect("uniform coefficients")
    }

    pub fn constant(a: CMatrix) -> Self {
        Self::from_vec(vec![a])
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::constant(zeros(rows, cols))
    }

    pub fn identity(m: usize) -> Self {
        Self::constant(identity(m))
    }

    /// `a · w^k`.
    pub fn monomial(a: CMatrix, k: usize) -> Self {
        let mut coeffs = vec![zeros(a.nrows(), a.ncols()); k];
        coeffs.push(a);
        Self::from_vec(coeffs)
    }

    /// Declares a formal degree (at least the stored length minus one).
    pub fn with_formal_degree(mut self, n: usize) -> Self {
        self.formal_degree = Some(n.max(self.coeffs.len() - 1));
        self
    }

    pub fn formal_degree(&self) -> Option<usize> {
        self.formal_degree
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn coeffs(&self) -> &[CMatrix] {
        &self.coeffs
    }

    /// Coefficient `k`, zero beyond the stored length.
    pub fn coeff(&self, k: usize) -> CMatrix {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| zeros(self.rows, self.cols))
    }

    /// Index of the last nonzero coefficient (zero for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| c.iter().any(|z| *z != Complex64::new(0.0, 0.0)))
            .unwrap_or(0)
    }

    /// Horner evaluation.
    pub fn eval(&self, w: Complex64) -> CMatrix {
        let mut acc = zeros(self.rows, self.cols);
        for c in self.coeffs.iter().rev() {
            acc = acc * w + c;
        }
        acc
    }

    /// Reciprocal polynomial at formal degree `n`: coefficient `k` is `C_{n-k}*`.
    pub fn reciprocal(&self, n: usize) -> Result<MatrixPoly> {
        let d = self.degree();
        if d > n {
            return Err(Error::DegreeExceeded {
                degree: d,
                formal: n,
            });
        }
        let coeffs = (0..=n).map(|k| self.coeff(n - k).adjoint()).collect();
        Ok(Self::from_vec(coeffs).with_formal_degree(n))
    }

    /// Product by full convolution.
    pub fn mul(&self, other: &MatrixPoly) -> MatrixPoly {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![zeros(self.rows, other.cols); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_vec(out)
    }

    pub fn add(&self, other: &MatrixPoly) -> MatrixPoly {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::from_vec((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &MatrixPoly) -> MatrixPoly {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::from_vec((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    /// `a · p(w)`.
    pub fn mul_left(&self, a: &CMatrix) -> MatrixPoly {
        Self::from_vec(self.coeffs.iter().map(|c| a * c).collect())
    }

    /// `p(w) · a`.
    pub fn mul_right(&self, a: &CMatrix) -> MatrixPoly {
        Self::from_vec(self.coeffs.iter().map(|c| c * a).collect())
    }

    pub fn scale(&self, s: Complex64) -> MatrixPoly {
        Self::from_vec(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `w^k · p(w)`.
    pub fn shift(&self, k: usize) -> MatrixPoly {
        let mut coeffs = vec![zeros(self.rows, self.cols); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::from_vec(coeffs)
    }

    /// Pads with zero coefficients to at least `len` entries.
    pub fn padded(&self, len: usize) -> MatrixPoly {
        let n = len.max(self.coeffs.len());
        Self::from_vec((0..n).map(|k| self.coeff(k)).collect())
    }

    /// Largest coefficient entry modulus of `self - other`.
    pub fn distance(&self, other: &MatrixPoly) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|k| max_abs(&(self.coeff(k) - other.coeff(k))))
            .fold(0.0, f64::max)
    }

    /// Block polynomial `[[a, b], [c, d]]`.
    pub fn block2x2(a: &MatrixPoly, b: &MatrixPoly, cc: &MatrixPoly, d: &MatrixPoly) -> MatrixPoly {
        let len = [a, b, cc, d].iter().map(|p| p.coeffs.len()).max().unwrap();
        Self::from_vec(
            (0..len)
                .map(|k| block2x2(&a.coeff(k), &b.coeff(k), &cc.coeff(k), &d.coeff(k)))
                .collect(),
        )
    }
}

/// Which construction produced a [`FourPolys`] value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    General,
    Recursive,
    Strict,
}

/// The polynomials `π, ρ, σ, τ` of degree at most `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourPolys {
    pub pi: MatrixPoly,
    pub rho: MatrixPoly,
    pub sigma: MatrixPoly,
    pub tau: MatrixPoly,
    pub construction: Construction,
    /// Formal degree used for reciprocals.
    pub n: usize,
}

impl FourPolys {
    fn base(a0: &CMatrix, construction: Construction) -> FourPolys {
        let m = a0.nrows();
        FourPolys {
            pi: MatrixPoly::constant(a0.clone()),
            rho: MatrixPoly::identity(m),
            sigma: MatrixPoly::constant(a0.clone()),
            tau: MatrixPoly::identity(m),
            construction,
            n: 0,
        }
    }

    /// Reciprocal at the formal degree `n`.
    pub fn rec(&self, p: &MatrixPoly) -> MatrixPoly {
        p.reciprocal(self.n).expect("degree bounded by n")
    }

    pub fn pi_rec(&self) -> MatrixPoly {
        self.rec(&self.pi)
    }

    pub fn rho_rec(&self) -> MatrixPoly {
        self.rec(&self.rho)
    }

    pub fn sigma_rec(&self) -> MatrixPoly {
        self.rec(&self.sigma)
    }

    pub fn tau_rec(&self) -> MatrixPoly {
        self.rec(&self.tau)
    }
}

/// `head + Σ_k w^k · (block k-1 of col)`.
fn from_column(head: &CMatrix, col: &CMatrix, m: usize) -> MatrixPoly {
    let n = col.nrows() / m;
    let mut coeffs = vec![head.clone()];
    coeffs.extend((0..n).map(|k| block(col, k * m, 0, m, m)));
    MatrixPoly::from_vec(coeffs)
}

/// `head + Σ_k w^k · (block n-k of row)`.
fn from_row(head: &CMatrix, row: &CMatrix, m: usize) -> MatrixPoly {
    let n = row.ncols() / m;
    let mut coeffs = vec![head.clone()];
    coeffs.extend((1..=n).map(|k| block(row, 0, (n - k) * m, m, m)));
    MatrixPoly::from_vec(coeffs)
}

struct Pieces {
    m: usize,
    s: CMatrix,
    p: CMatrix,
    q: CMatrix,
    jb: CMatrix,
    y: CMatrix,
    z: CMatrix,
}

fn pieces(seq: &PotapovSeq) -> Pieces {
    let n = seq.order();
    let prev = seq.prefix(n - 1);
    let (p, q) = prev.defect_matrices();
    Pieces {
        m: seq.m(),
        s: prev.block_toeplitz(),
        p,
        q,
        jb: seq.signature().block_diag(n).matrix().clone(),
        y: seq.y(),
        z: seq.z(),
    }
}

/// Pseudoinverse-based polynomials; valid for strict and degenerate sequences.
pub fn four_polys_general(seq: &PotapovSeq) -> Result<FourPolys> {
    if !seq.is_potapov() {
        return Err(Error::NotPotapov);
    }
    let a0 = seq.coeff(0);
    let n = seq.order();
    if n == 0 {
        return Ok(FourPolys::base(a0, Construction::General));
    }
    let tol = seq.tolerances();
    let Pieces {
        m,
        s,
        p,
        q,
        jb,
        y,
        z,
    } = pieces(seq);
    let v = pinv(&q, tol) * s.adjoint() * &jb * &y;
    let w = &z * &jb * s.adjoint() * pinv(&p, tol);
    let x = &y + &s * &v;
    let yy = &w * &s + &z;
    let im = identity(m);
    Ok(FourPolys {
        pi: from_column(a0, &x, m),
        rho: from_column(&im, &v, m),
        sigma: from_row(a0, &yy, m),
        tau: from_row(&im, &w, m),
        construction: Construction::General,
        n,
    })
}

/// Inverse-based polynomials of a strict sequence.
pub fn four_polys_strict(seq: &PotapovSeq) -> Result<FourPolys> {
    if !seq.is_strict() {
        return Err(Error::NotStrict);
    }
    let a0 = seq.coeff(0);
    let n = seq.order();
    if n == 0 {
        return Ok(FourPolys::base(a0, Construction::Strict));
    }
    let Pieces {
        m,
        s,
        p,
        q,
        jb,
        y,
        z,
    } = pieces(seq);
    let pinv_ = inverse(&p).map_err(|_| Error::NotStrict)?;
    let qinv = inverse(&q).map_err(|_| Error::NotStrict)?;
    let im = identity(m);
    Ok(FourPolys {
        pi: from_column(a0, &(&jb * &pinv_ * &y), m),
        rho: from_column(&im, &(&jb * s.adjoint() * &pinv_ * &y), m),
        sigma: from_row(a0, &(&z * &qinv * &jb), m),
        tau: from_row(&im, &(&z * &qinv * s.adjoint() * &jb), m),
        construction: Construction::Strict,
        n,
    })
}

/// Polynomials built order by order from the ball parameters.
///
/// `t_k = L_k⁺ (A_k - M_k)` and `u_k = (A_k - M_k) R_k⁺` drive
/// `π_{k+1} = π_k + w J τ̃_k t_{k+1}`, `ρ_{k+1} = ρ_k + w J σ̃_k t_{k+1}`,
/// `σ_{k+1} = σ_k + u_{k+1} w ρ̃_k J`, `τ_{k+1} = τ_k + u_{k+1} w π̃_k J`.
pub fn four_polys_recursive(seq: &PotapovSeq) -> Result<FourPolys> {
    if !seq.is_potapov() {
        return Err(Error::NotPotapov);
    }
    let tol = seq.tolerances();
    let jm = seq.signature().matrix();
    let mut cur = FourPolys::base(seq.coeff(0), Construction::Recursive);
    for k in 0..seq.order() {
        let ball = seq.ball_parameters_at(k + 1)?;
        let diff = seq.coeff(k + 1) - &ball.center;
        let t = pinv(&ball.left, tol) * &diff;
        let u = &diff * pinv(&ball.right, tol);
        let next = FourPolys {
            pi: cur
                .pi
                .add(&cur.tau_rec().mul_left(jm).mul_right(&t).shift(1)),
            rho: cur
                .rho
                .add(&cur.sigma_rec().mul_left(jm).mul_right(&t).shift(1)),
            sigma: cur
                .sigma
                .add(&cur.rho_rec().mul_right(jm).mul_left(&u).shift(1)),
            tau: cur
                .tau
                .add(&cur.pi_rec().mul_right(jm).mul_left(&u).shift(1)),
            construction: Construction::Recursive,
            n: k + 1,
        };
        cur = next;
    }
    Ok(cur)
}

/// The `2m × 2m` resolvent matrix polynomials of a strict sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolventPair {
    /// `[[wJτ̃, π], [wJσ̃, ρ]] · diag(√L⁻¹, √R⁻¹)`.
    pub c: MatrixPoly,
    /// `diag(√R⁻¹, √L⁻¹) · [[wρ̃J, wπ̃J], [σ, τ]]`.
    pub d: MatrixPoly,
}

/// Inverse square roots `(√L_{n+1}⁻¹, √R_{n+1}⁻¹)` of a strict sequence.
pub(crate) fn inverse_sqrt_radii(seq: &PotapovSeq) -> Result<(CMatrix, CMatrix)> {
    let b = seq.ball_parameters()?;
    let li = inverse(&b.sqrt_left).map_err(|_| Error::NotStrict)?;
    let ri = inverse(&b.sqrt_right).map_err(|_| Error::NotStrict)?;
    Ok((li, ri))
}

pub fn resolvents(seq: &PotapovSeq) -> Result<ResolventPair> {
    let polys = four_polys_strict(seq)?;
    let jm = seq.signature().matrix();
    let (li, ri) = inverse_sqrt_radii(seq)?;
    let left = MatrixPoly::block2x2(
        &polys.tau_rec().mul_left(jm).shift(1),
        &polys.pi,
        &polys.sigma_rec().mul_left(jm).shift(1),
        &polys.rho,
    );
    let right_scale = crate::matkernel::block_diag2(&li, &ri);
    let c = left.mul_right(&right_scale);
    let inner = MatrixPoly::block2x2(
        &polys.rho_rec().mul_right(jm).shift(1),
        &polys.pi_rec().mul_right(jm).shift(1),
        &polys.sigma,
        &polys.tau,
    );
    let d = inner.mul_left(&crate::matkernel::block_diag2(&ri, &li));
    Ok(ResolventPair { c, d })
}

/// Degree-one factors of the resolvents.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolventFactors {
    pub c0: MatrixPoly,
    pub d0: MatrixPoly,
    /// `G_1, ..., G_n` with `𝔠_n = 𝔠_0 G_1 ⋯ G_n`.
    pub g: Vec<MatrixPoly>,
    /// `H_1, ..., H_n` with `𝔡_n = H_n ⋯ H_1 𝔡_0`.
    pub h: Vec<MatrixPoly>,
    /// Parameters `K_1, ..., K_n`.
    pub k: Vec<CMatrix>,
}

impl ResolventFactors {
    pub fn product_c(&self) -> MatrixPoly {
        self.g.iter().fold(self.c0.clone(), |acc, g| acc.mul(g))
    }

    pub fn product_d(&self) -> MatrixPoly {
        self.h.iter().fold(self.d0.clone(), |acc, h| h.mul(&acc))
    }
}

pub fn resolvent_factors(seq: &PotapovSeq) -> Result<ResolventFactors> {
    if !seq.is_strict() {
        return Err(Error::NotStrict);
    }
    let m = seq.m();
    let base = resolvents(&seq.prefix(0))?;
    let im = identity(m);
    let zm = zeros(m, m);
    let mut g = Vec::new();
    let mut h = Vec::new();
    let mut ks = Vec::new();
    let mut cur = seq.ball_parameters_at(1)?;
    for k in 1..=seq.order() {
        let next = seq.ball_parameters_at(k + 1)?;
        let kk = seq.schur_parameter(k)?;
        let l_ratio = &cur.sqrt_left * inverse(&next.sqrt_left)?;
        let r_ratio = &cur.sqrt_right * inverse(&next.sqrt_right)?;
        let mix = block2x2(&im, &kk, &kk.adjoint(), &im);
        let gk = MatrixPoly::from_vec(vec![
            block2x2(&zm, &zm, &zm, &r_ratio),
            block2x2(&l_ratio, &zm, &zm, &zm),
        ])
        .mul_left(&mix);
        let l_back = inverse(&next.sqrt_left)? * &cur.sqrt_left;
        let r_back = inverse(&next.sqrt_right)? * &cur.sqrt_right;
        let mix_h = block2x2(&im, &kk.adjoint(), &kk, &im);
        let hk = MatrixPoly::from_vec(vec![
            block2x2(&zm, &zm, &zm, &l_back),
            block2x2(&r_back, &zm, &zm, &zm),
        ])
        .mul_right(&mix_h);
        g.push(gk);
        h.push(hk);
        ks.push(kk);
        cur = next;
    }
    Ok(ResolventFactors {
        c0: base.c,
        d0: base.d,
        g,
        h,
        k: ks,
    })
}

/// Unitaries linking the J-side resolvent with the resolvent of the transformed sequence.
///
/// `U1 = √L (B0𝐐 - 𝐏)* √l⁻¹` and `U2 = √R (𝐐B0 + 𝐏) √r⁻¹`, where `l, r` are the
/// ball parameters of the transformed sequence `B`. Then
/// `𝒜 𝒞 = 𝔠 diag(-U1, U2)` with `𝒜 = [[𝐏, 𝐐], [𝐐, 𝐏]]` and `𝒞` the resolvent of `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct PgLink {
    pub u1: CMatrix,
    pub u2: CMatrix,
    pub a: CMatrix,
    pub schur_resolvent: MatrixPoly,
}

pub fn pg_link(seq: &PotapovSeq) -> Result<PgLink> {
    if !seq.is_strict() {
        return Err(Error::NotStrict);
    }
    let schur = seq.pg_transform()?;
    let j = seq.signature();
    let (p, q) = (j.p_proj(), j.q_proj());
    let b0 = schur.coeff(0);
    let big = seq.ball_parameters()?;
    let (li, ri) = inverse_sqrt_radii(&schur)?;
    let u1 = &big.sqrt_left * (b0 * &q - &p).adjoint() * li;
    let u2 = &big.sqrt_right * (&q * b0 + &p) * ri;
    Ok(PgLink {
        u1,
        u2,
        a: block2x2(&p, &q, &q, &p),
        schur_resolvent: resolvents(&schur)?.c,
    })
}

/// `U_{mm} = [[0, I], [-I, 0]]`.
pub fn u_mm(m: usize) -> CMatrix {
    block2x2(&zeros(m, m), &identity(m), &(-identity(m)), &zeros(m, m))
}

/// Elementary Blaschke factor `b_α(w)`.
pub fn b_alpha(alpha: Complex64, w: Complex64) -> Complex64 {
    if alpha == c(0.0, 0.0) {
        w
    } else {
        let unit = alpha.norm() / alpha;
        unit * (alpha - w) / (c(1.0, 0.0) - alpha.conj() * w)
    }
}

/// Data of a Blaschke-Potapov J-elementary factor.
#[derive(Clone, Debug, PartialEq)]
pub enum BpKind {
    /// `I + (b_α - 1) P` with `P² = P`, `JP ⪰ 0`.
    First { alpha: Complex64, p: CMatrix },
    /// `I + (1/b_α - 1) Q` with `Q² = Q`, `-JQ ⪰ 0`.
    Second { alpha: Complex64, q: CMatrix },
    /// `I - (u + w)/(u - w) R` with `|u| = 1`, `R² = 0`, `JR ⪰ 0`.
    Third { u: Complex64, r: CMatrix },
}

impl BpKind {
    /// Right-hand side of the defect identity `J - F(w)* J F(w)`.
    pub fn defect(&self, j: &SignatureMatrix, w: Complex64) -> CMatrix {
        let jm = j.matrix();
        match self {
            BpKind::First { alpha, p } => {
                let b = b_alpha(*alpha, w);
                jm * p * c(1.0 - b.norm_sqr(), 0.0)
            }
            BpKind::Second { alpha, q } => {
                let b2 = b_alpha(*alpha, w).norm_sqr();
                -(jm * q) * c((1.0 - b2) / b2, 0.0)
            }
            BpKind::Third { u, r } => {
                let s = 2.0 * (1.0 - w.norm_sqr()) / (u - w).norm_sqr();
                jm * r * c(s, 0.0)
            }
        }
    }
}

fn check_psd(h: &CMatrix, what: &str, tol: &Tolerances) -> Result<()> {
    if max_abs(&(h - h.adjoint())) > tol.residual * (1.0 + max_abs(h)) {
        return Err(Error::InvalidFactorData(format!("{what} is not Hermitian")));
    }
    if min_eigenvalue(&hermitian_part(h)) < -tol.psd_eig {
        return Err(Error::InvalidFactorData(format!(
            "{what} is not semidefinite"
        )));
    }
    Ok(())
}

fn check_alpha(alpha: Complex64) -> Result<()> {
    if alpha.norm() >= 1.0 {
        return Err(Error::InvalidFactorData(
            "α must lie in the open disk".into(),
        ));
    }
    Ok(())
}

/// `(1 - ᾱw) I`, or `I` when `α = 0`.
fn scalar_denominator(alpha: Complex64, m: usize) -> MatrixPoly {
    let im = identity(m);
    if alpha == c(0.0, 0.0) {
        MatrixPoly::identity(m)
    } else {
        MatrixPoly::from_vec(vec![im.clone(), &im * (-alpha.conj())])
    }
}

/// `(1 - ᾱw) (I + (b_α - 1) P)` as a polynomial of degree one.
fn scaled_first_kind(alpha: Complex64, p: &CMatrix) -> MatrixPoly {
    let im = identity(p.nrows());
    if alpha == c(0.0, 0.0) {
        return MatrixPoly::from_vec(vec![&im - p, p.clone()]);
    }
    let unit = alpha.norm() / alpha;
    let c0 = &im + p * (unit * alpha - c(1.0, 0.0));
    let c1 = &im * (-alpha.conj()) + p * (alpha.conj() - unit);
    MatrixPoly::from_vec(vec![c0, c1])
}

/// Blaschke-Potapov J-elementary factor as a rational function `num · den⁻¹`.
pub fn bp_factor(kind: &BpKind, j: &SignatureMatrix, tol: &Tolerances) -> Result<RationalMatrixFn> {
    let m = j.dim();
    let jm = j.matrix();
    let im = identity(m);
    let check_shape = |x: &CMatrix| {
        if x.shape() != (m, m) {
            Err(Error::DimensionMismatch("factor data must be m x m".into()))
        } else if max_abs(x) <= tol.residual {
            Err(Error::InvalidFactorData(
                "factor data must be nonzero".into(),
            ))
        } else {
            Ok(())
        }
    };
    let (num, den) = match kind {
        BpKind::First { alpha, p } => {
            check_shape(p)?;
            check_alpha(*alpha)?;
            if max_abs(&(p * p - p)) > tol.residual {
                return Err(Error::InvalidFactorData("P is not idempotent".into()));
            }
            check_psd(&(jm * p), "JP", tol)?;
            (scaled_first_kind(*alpha, p), scalar_denominator(*alpha, m))
        }
        BpKind::Second { alpha, q } => {
            check_shape(q)?;
            check_alpha(*alpha)?;
            if max_abs(&(q * q - q)) > tol.residual {
                return Err(Error::InvalidFactorData("Q is not idempotent".into()));
            }
            check_psd(&(-(jm * q)), "-JQ", tol)?;
            // I + (1/b - 1) Q is the inverse of I + (b - 1) Q
            (scalar_denominator(*alpha, m), scaled_first_kind(*alpha, q))
        }
        BpKind::Third { u, r } => {
            check_shape(r)?;
            if (u.norm() - 1.0).abs() > tol.residual {
                return Err(Error::InvalidFactorData("u must be unimodular".into()));
            }
            if max_abs(&(r * r)) > tol.residual {
                return Err(Error::InvalidFactorData(
                    "R is not nilpotent of order two".into(),
                ));
            }
            check_psd(&(jm * r), "JR", tol)?;
            // ((u - w) I - (u + w) R) / (u - w)
            let c0 = &im * *u - r * *u;
            let c1 = -&im - r;
            let den = MatrixPoly::from_vec(vec![&im * *u, -im.clone()]);
            (MatrixPoly::from_vec(vec![c0, c1]), den)
        }
    };
    Ok(RationalMatrixFn::new(num, den, Orientation::Left))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::random_strict_seq;

    fn scalar(x: f64) -> CMatrix {
        CMatrix::from_element(1, 1, c(x, 0.0))
    }

    #[test]
    fn reciprocal_examples() {
        let p = MatrixPoly::identity(2);
        assert_eq!(p.reciprocal(0).unwrap().coeffs(), &[identity(2)]);
        let a = CMatrix::from_row_slice(1, 1, &[c(1.0, 2.0)]);
        let r = MatrixPoly::constant(a.clone()).reciprocal(1).unwrap();
        assert_eq!(r.coeff(0), scalar(0.0));
        assert_eq!(r.coeff(1), a.adjoint());
        let q = MatrixPoly::monomial(a, 2);
        assert!(matches!(q.reciprocal(1), Err(Error::DegreeExceeded { .. })));
    }

    #[test]
    fn eval_examples() {
        let a = CMatrix::from_row_slice(1, 1, &[c(0.3, -0.1)]);
        assert_eq!(MatrixPoly::constant(a.clone()).eval(c(0.7, 0.2)), a);
        let p = MatrixPoly::new(vec![scalar(1.0), scalar(2.0), scalar(3.0)]).unwrap();
        assert_eq!(p.eval(c(0.0, 0.0)), scalar(1.0));
        assert!((p.eval(c(2.0, 0.0))[(0, 0)].re - 17.0).abs() < 1e-14);
    }

    #[test]
    fn scalar_first_order_polys() {
        let j = SignatureMatrix::identity(1);
        let seq = PotapovSeq::with_default_tol(j, vec![scalar(0.0), scalar(0.4)]).unwrap();
        let f = four_polys_general(&seq).unwrap();
        assert!(f.rho.distance(&MatrixPoly::identity(1)) < 1e-15);
        let expect = MatrixPoly::new(vec![scalar(0.0), scalar(0.4)]).unwrap();
        assert!(f.pi.distance(&expect) < 1e-15);
    }

    #[test]
    fn order_zero_constructions_agree() {
        let j = SignatureMatrix::from_diag(&[-1.0]).unwrap();
        let seq = PotapovSeq::with_default_tol(j, vec![scalar(2.0)]).unwrap();
        for f in [
            four_polys_general(&seq).unwrap(),
            four_polys_strict(&seq).unwrap(),
            four_polys_recursive(&seq).unwrap(),
        ] {
            assert_eq!(f.pi.coeffs(), &[scalar(2.0)]);
            assert_eq!(f.rho.coeffs(), &[scalar(1.0)]);
            assert_eq!(f.sigma.coeffs(), &[scalar(2.0)]);
            assert_eq!(f.tau.coeffs(), &[scalar(1.0)]);
        }
    }

    #[test]
    fn strict_matches_general() {
        let j = SignatureMatrix::standard(1, 1);
        let seq = random_strict_seq(2, &j, 3, 3, 0.6).unwrap();
        let g = four_polys_general(&seq).unwrap();
        let s = four_polys_strict(&seq).unwrap();
        assert!(g.pi.distance(&s.pi) < 1e-9);
        assert!(g.rho.distance(&s.rho) < 1e-9);
        assert!(g.sigma.distance(&s.sigma) < 1e-9);
        assert!(g.tau.distance(&s.tau) < 1e-9);
    }

    #[test]
    fn schur_resolvent_at_zero_data() {
        let j = SignatureMatrix::identity(1);
        let seq = PotapovSeq::with_default_tol(j, vec![scalar(0.0)]).unwrap();
        let r = resolvents(&seq).unwrap();
        let w = c(0.3, 0.4);
        let expect = CMatrix::from_row_slice(2, 2, &[w, c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(max_abs(&(r.c.eval(w) - expect)) < 1e-15);
    }

    #[test]
    fn first_kind_trivial_and_rejected() {
        let t = Tolerances::default();
        let j = SignatureMatrix::identity(2);
        let f = bp_factor(
            &BpKind::First {
                alpha: c(0.0, 0.0),
                p: identity(2),
            },
            &j,
            &t,
        )
        .unwrap();
        let w = c(0.2, -0.5);
        assert!(max_abs(&(f.eval(w).unwrap() - identity(2) * w)) < 1e-15);
        let jn = SignatureMatrix::from_diag(&[-1.0, -1.0]).unwrap();
        assert!(bp_factor(
            &BpKind::First {
                alpha: c(0.0, 0.0),
                p: identity(2)
            },
            &jn,
            &t
        )
        .is_err());
    }
}
