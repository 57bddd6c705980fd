//! Finite J-Potapov sequences.
//!
//! A sequence `A_0, ..., A_n` of `m × m` matrices is a J-Potapov sequence when
//! its lower block Toeplitz matrix `S_n` is `J_[n]`-contractive. This module
//! assembles `S_n` and the defect matrices, classifies sequences, computes the
//! matrix ball `(M, L, R)` of admissible next coefficients, extends sequences
//! through that ball and implements the Potapov-Ginzburg transform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matkernel::{
    c, hermitian_part, inverse, min_eigenvalue, pinv, psd_sqrt_with_pinv, set_block,
    singular_values, spectral_norm, zeros, CMatrix, SignatureMatrix, Tolerances,
};

/// Sign class of a sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// `S_n` is strictly `J_[n]`-contractive.
    Strict,
    /// `S_n` is `J_[n]`-contractive with a singular defect.
    Degenerate,
    /// Not a J-Potapov sequence.
    Invalid,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::Strict => "strict",
            Classification::Degenerate => "degenerate",
            Classification::Invalid => "invalid",
        }
    }
}

/// Center and semi-radii of the matrix ball of admissible next coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BallParams {
    pub center: CMatrix,
    pub left: CMatrix,
    pub right: CMatrix,
    pub sqrt_left: CMatrix,
    pub sqrt_right: CMatrix,
    pub sqrt_left_pinv: CMatrix,
    pub sqrt_right_pinv: CMatrix,
}

impl BallParams {
    fn from_parts(
        center: CMatrix,
        left: CMatrix,
        right: CMatrix,
        tol: &Tolerances,
    ) -> Result<Self> {
        let left = hermitian_part(&left);
        let right = hermitian_part(&right);
        let (sqrt_left, sqrt_left_pinv) = psd_sqrt_with_pinv(&left, tol)?;
        let (sqrt_right, sqrt_right_pinv) = psd_sqrt_with_pinv(&right, tol)?;
        Ok(BallParams {
            center,
            left,
            right,
            sqrt_left,
            sqrt_right,
            sqrt_left_pinv,
            sqrt_right_pinv,
        })
    }

    /// `M + √L K √R`.
    pub fn point(&self, k: &CMatrix) -> CMatrix {
        &self.center + &self.sqrt_left * k * &self.sqrt_right
    }
}

/// A finite sequence `A_0..A_n` together with its signature matrix.
#[derive(Clone, Debug)]
pub struct PotapovSeq {
    j: SignatureMatrix,
    coeffs: Vec<CMatrix>,
    tol: Tolerances,
    class: Classification,
    ball: Option<BallParams>,
}

impl PartialEq for PotapovSeq {
    fn eq(&self, other: &Self) -> bool {
        self.j == other.j && self.coeffs == other.coeffs
    }
}

impl PotapovSeq {
    /// Builds a sequence and classifies it eagerly.
    pub fn new(j: SignatureMatrix, coeffs: Vec<CMatrix>, tol: Tolerances) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::DimensionMismatch("sequence must contain A_0".into()));
        }
        let m = j.dim();
        if let Some(bad) = coeffs.iter().position(|a| a.nrows() != m || a.ncols() != m) {
            return Err(Error::DimensionMismatch(format!(
                "coefficient {bad} is not {m}x{m}"
            )));
        }
        if coeffs
            .iter()
            .any(|a| a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()))
        {
            return Err(Error::Parse("coefficients must be finite".into()));
        }
        let class = classify_coeffs(&j, &coeffs, &tol);
        let ball = if class == Classification::Invalid {
            None
        } else {
            ball_from_coeffs(&j, &coeffs, &tol).ok()
        };
        Ok(PotapovSeq {
            j,
            coeffs,
            tol,
            class,
            ball,
        })
    }

    /// Builds a sequence with default tolerances.
    pub fn with_default_tol(j: SignatureMatrix, coeffs: Vec<CMatrix>) -> Result<Self> {
        Self::new(j, coeffs, Tolerances::default())
    }

    pub fn m(&self) -> usize {
        self.j.dim()
    }

    /// Index `n` of the last coefficient.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CMatrix] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &CMatrix {
        &self.coeffs[k]
    }

    pub fn signature(&self) -> &SignatureMatrix {
        &self.j
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn classification(&self) -> Classification {
        self.class
    }

    pub fn is_strict(&self) -> bool {
        self.class == Classification::Strict
    }

    pub fn is_potapov(&self) -> bool {
        self.class != Classification::Invalid
    }

    /// The subsequence `A_0..A_k`.
    pub fn prefix(&self, k: usize) -> PotapovSeq {
        assert!(
            k <= self.order(),
            "prefix order {k} exceeds {}",
            self.order()
        );
        if k == self.order() {
            return self.clone();
        }
        PotapovSeq::new(self.j.clone(), self.coeffs[..=k].to_vec(), self.tol)
            .expect("prefix of a well-formed sequence")
    }

    /// Same coefficients, different tolerances (reclassified).
    pub fn with_tolerances(&self, tol: Tolerances) -> PotapovSeq {
        PotapovSeq::new(self.j.clone(), self.coeffs.clone(), tol).expect("well-formed sequence")
    }

    /// Lower block Toeplitz matrix `S_n`.
    pub fn block_toeplitz(&self) -> CMatrix {
        block_toeplitz(&self.coeffs, self.m())
    }

    /// `P_n = J_[n] - S_n J_[n] S_n*` and `Q_n = J_[n] - S_n* J_[n] S_n`.
    pub fn defect_matrices(&self) -> (CMatrix, CMatrix) {
        defect_matrices(&self.j, &self.coeffs)
    }

    /// Block column `(A_1; ...; A_n)`.
    pub fn y(&self) -> CMatrix {
        y_col(&self.coeffs, self.m())
    }

    /// Block row `(A_n, ..., A_1)`.
    pub fn z(&self) -> CMatrix {
        z_row(&self.coeffs, self.m())
    }

    /// Ball `(M_{n+1}, L_{n+1}, R_{n+1})` of admissible coefficients `A_{n+1}`.
    pub fn ball_parameters(&self) -> Result<&BallParams> {
        if self.class == Classification::Invalid {
            return Err(Error::NotPotapov);
        }
        self.ball.as_ref().ok_or(Error::NotPotapov)
    }

    /// Ball parameters `(M_k, L_k, R_k)` of the prefix `A_0..A_{k-1}`, `1 ≤ k ≤ n+1`.
    pub fn ball_parameters_at(&self, k: usize) -> Result<BallParams> {
        assert!(k >= 1 && k <= self.order() + 1);
        if k == self.order() + 1 {
            return self.ball_parameters().cloned();
        }
        self.prefix(k - 1).ball_parameters().cloned()
    }

    /// Schur-type parameter `K_k = √L_k⁺ (A_k - M_k) √R_k⁺` for `1 ≤ k ≤ n`.
    pub fn schur_parameter(&self, k: usize) -> Result<CMatrix> {
        assert!(k >= 1 && k <= self.order());
        let b = self.ball_parameters_at(k)?;
        Ok(&b.sqrt_left_pinv * (&self.coeffs[k] - &b.center) * &b.sqrt_right_pinv)
    }

    /// All parameters `K_1..K_n`.
    pub fn schur_parameters(&self) -> Result<Vec<CMatrix>> {
        (1..=self.order())
            .map(|k| self.schur_parameter(k))
            .collect()
    }

    /// Appends `k` coefficients, each the center of the current ball.
    pub fn extend_central(&self, k: usize) -> Result<PotapovSeq> {
        let mut seq = self.clone();
        for _ in 0..k {
            let center = seq.ball_parameters()?.center.clone();
            seq = seq.push(center)?;
        }
        Ok(seq)
    }

    /// Appends `A_{n+1} = M + √L K √R` for a contractive `K`.
    pub fn extend_with_parameter(&self, k: &CMatrix) -> Result<PotapovSeq> {
        let m = self.m();
        if k.nrows() != m || k.ncols() != m {
            return Err(Error::DimensionMismatch("parameter must be m x m".into()));
        }
        let norm = spectral_norm(k);
        if norm > 1.0 + self.tol.residual {
            return Err(Error::NotContractive(norm));
        }
        let next = self.ball_parameters()?.point(k);
        self.push(next)
    }

    /// Appends an arbitrary coefficient and reclassifies.
    pub fn push(&self, next: CMatrix) -> Result<PotapovSeq> {
        let mut coeffs = self.coeffs.clone();
        coeffs.push(next);
        PotapovSeq::new(self.j.clone(), coeffs, self.tol)
    }

    /// J-Potapov-Ginzburg transform; the result is tagged with `J = I`.
    pub fn pg_transform(&self) -> Result<PotapovSeq> {
        let b = pg_coeffs(&self.coeffs, &self.j, &self.tol)?;
        PotapovSeq::new(SignatureMatrix::identity(self.m()), b, self.tol)
    }

    /// J-Potapov-Ginzburg transform of a Schur sequence, returned with signature `j`.
    pub fn pg_inverse(schur: &PotapovSeq, j: &SignatureMatrix) -> Result<PotapovSeq> {
        let a = pg_coeffs(&schur.coeffs, j, &schur.tol)?;
        PotapovSeq::new(j.clone(), a, schur.tol)
    }
}

/// Lower block Toeplitz matrix with block `(i, j) = A_{i-j}`.
pub fn block_toeplitz(coeffs: &[CMatrix], m: usize) -> CMatrix {
    let n1 = coeffs.len();
    let mut s = zeros(n1 * m, n1 * m);
    for i in 0..n1 {
        for jj in 0..=i {
            set_block(&mut s, i * m, jj * m, &coeffs[i - jj]);
        }
    }
    s
}

/// Defect matrices `(P, Q)` of the block Toeplitz matrix of `coeffs`.
pub fn defect_matrices(j: &SignatureMatrix, coeffs: &[CMatrix]) -> (CMatrix, CMatrix) {
    let s = block_toeplitz(coeffs, j.dim());
    let jb = j.block_diag(coeffs.len());
    let jm = jb.matrix();
    let p = hermitian_part(&(jm - &s * jm * s.adjoint()));
    let q = hermitian_part(&(jm - s.adjoint() * jm * &s));
    (p, q)
}

/// Classification of `coeffs` by the smaller of the two defect spectra.
pub fn classify_coeffs(
    j: &SignatureMatrix,
    coeffs: &[CMatrix],
    tol: &Tolerances,
) -> Classification {
    let (p, q) = defect_matrices(j, coeffs);
    let lo = min_eigenvalue(&p).min(min_eigenvalue(&q));
    if lo > tol.psd_eig {
        Classification::Strict
    } else if lo >= -tol.psd_eig {
        Classification::Degenerate
    } else {
        Classification::Invalid
    }
}

fn y_col(coeffs: &[CMatrix], m: usize) -> CMatrix {
    let n = coeffs.len() - 1;
    let mut y = zeros(n * m, m);
    for (k, a) in coeffs.iter().enumerate().skip(1) {
        set_block(&mut y, (k - 1) * m, 0, a);
    }
    y
}

fn z_row(coeffs: &[CMatrix], m: usize) -> CMatrix {
    let n = coeffs.len() - 1;
    let mut z = zeros(m, n * m);
    for (k, a) in coeffs.iter().enumerate().skip(1) {
        set_block(&mut z, 0, (n - k) * m, a);
    }
    z
}

fn ball_from_coeffs(
    j: &SignatureMatrix,
    coeffs: &[CMatrix],
    tol: &Tolerances,
) -> Result<BallParams> {
    let m = j.dim();
    let jm = j.matrix();
    let a0 = &coeffs[0];
    let l1 = jm - a0 * jm * a0.adjoint();
    let r1 = jm - a0.adjoint() * jm * a0;
    let n = coeffs.len() - 1;
    if n == 0 {
        return BallParams::from_parts(zeros(m, m), l1, r1, tol);
    }
    let prev = &coeffs[..n];
    let s = block_toeplitz(prev, m);
    let (p, q) = defect_matrices(j, prev);
    let pp = pinv(&p, tol);
    let qp = pinv(&q, tol);
    let jb = j.block_diag(n);
    let y = y_col(coeffs, m);
    let z = z_row(coeffs, m);
    let center = -(&z * jb.matrix() * s.adjoint() * &pp * &y);
    let left = l1 - &z * qp * z.adjoint();
    let right = r1 - y.adjoint() * pp * &y;
    BallParams::from_parts(center, left, right, tol)
}

/// Applies the J-Potapov-Ginzburg transform order by order.
///
/// Solves `Σ_{i≤k} B_{k-i} Y_i = X_k` with `X = 𝐏S + 𝐐`, `Y = 𝐐S + 𝐏` block Toeplitz.
pub fn pg_coeffs(
    coeffs: &[CMatrix],
    j: &SignatureMatrix,
    tol: &Tolerances,
) -> Result<Vec<CMatrix>> {
    let p = j.p_proj();
    let q = j.q_proj();
    let y0 = &q * &coeffs[0] + &p;
    let sv = singular_values(&y0);
    if sv.last().copied().unwrap_or(0.0) <= tol.residual * sv[0].max(1.0) {
        return Err(Error::SingularPg);
    }
    let y0inv = inverse(&y0).map_err(|_| Error::SingularPg)?;
    let mut out: Vec<CMatrix> = Vec::with_capacity(coeffs.len());
    for k in 0..coeffs.len() {
        let mut rhs = if k == 0 {
            &p * &coeffs[0] + &q
        } else {
            &p * &coeffs[k]
        };
        for i in 1..=k {
            rhs -= &out[k - i] * (&q * &coeffs[i]);
        }
        out.push(rhs * &y0inv);
    }
    Ok(out)
}

/// Complex Gaussian matrix with independent `N(0, 1/2) + i N(0, 1/2)` entries.
pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re * s, im * s)
    })
}

/// Random matrix with spectral norm exactly `norm`.
pub fn random_with_norm(rng: &mut impl Rng, m: usize, norm: f64) -> CMatrix {
    let g = gaussian_matrix(rng, m, m);
    let s = spectral_norm(&g);
    g.scale(norm / s)
}

/// Lower bound on `σ_min(𝐐B + 𝐏)` for sampled Schur-side matrices `B`.
///
/// Keeps `‖A_0‖` near two when `J` has negative directions; larger `A_0`
/// makes the coefficients grow geometrically and the block Toeplitz defect
/// matrices badly conditioned.
const MIN_TRANSFORM_SV: f64 = 0.5;

/// Random strictly J-contractive matrix.
///
/// Draws a strict contraction with a well-conditioned `𝐐B + 𝐏` by rejection and
/// maps it through the J-Potapov-Ginzburg transform.
pub fn random_strict_j_contraction(
    rng: &mut impl Rng,
    j: &SignatureMatrix,
    tol: &Tolerances,
) -> CMatrix {
    let m = j.dim();
    let (p, q) = (j.p_proj(), j.q_proj());
    loop {
        let r = rng.random_range(0.1..0.85);
        let b = random_with_norm(rng, m, r);
        let y0 = &q * &b + &p;
        let sv = singular_values(&y0);
        if sv[m - 1] < MIN_TRANSFORM_SV {
            continue;
        }
        let a = pg_coeffs(std::slice::from_ref(&b), j, tol).expect("conditioned transform");
        return a.into_iter().next().unwrap();
    }
}

/// Deterministic random strict sequence of order `n`.
///
/// `A_0` is strictly J-contractive; every further coefficient is
/// `M + √L K √R` with a random `K` of norm at most `margin`.
pub fn random_strict_seq(
    m: usize,
    j: &SignatureMatrix,
    n: usize,
    seed: u64,
    margin: f64,
) -> Result<PotapovSeq> {
    random_strict_seq_with_tol(m, j, n, seed, margin, Tolerances::default())
}

pub fn random_strict_seq_with_tol(
    m: usize,
    j: &SignatureMatrix,
    n: usize,
    seed: u64,
    margin: f64,
    tol: Tolerances,
) -> Result<PotapovSeq> {
    if j.dim() != m {
        return Err(Error::DimensionMismatch(
            "signature size differs from m".into(),
        ));
    }
    if !(0.0..1.0).contains(&margin) {
        return Err(Error::InvalidParam("margin must lie in [0, 1)".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a0 = random_strict_j_contraction(&mut rng, j, &tol);
    let mut seq = PotapovSeq::new(j.clone(), vec![a0], tol)?;
    for _ in 0..n {
        let k = if margin == 0.0 {
            zeros(m, m)
        } else {
            let r = margin * rng.random_range(0.25..=1.0);
            random_with_norm(&mut rng, m, r)
        };
        seq = seq.extend_with_parameter(&k)?;
    }
    Ok(seq)
}

/// Random contraction whose largest singular value is exactly one.
pub fn random_boundary_contraction(rng: &mut impl Rng, m: usize, full_unitary: bool) -> CMatrix {
    let u = gaussian_matrix(rng, m, m).qr().q();
    let v = gaussian_matrix(rng, m, m).qr().q();
    let mut d = zeros(m, m);
    for i in 0..m {
        let s = if i == 0 || full_unitary {
            1.0
        } else {
            rng.random_range(0.0..0.9)
        };
        d[(i, i)] = c(s, 0.0);
    }
    u * d * v.adjoint()
}

/// Deterministic random degenerate sequence of order `n`.
///
/// Either `A_0` already has a singular defect, or a strict prefix is extended
/// once by a boundary parameter; the remaining coefficients are ball centers.
pub fn random_degenerate_seq(
    m: usize,
    j: &SignatureMatrix,
    n: usize,
    seed: u64,
) -> Result<PotapovSeq> {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_de6e);
    let break_at = rng.random_range(0..=n);
    let mut seq = if break_at == 0 {
        let (p, q) = (j.p_proj(), j.q_proj());
        loop {
            let b = random_boundary_contraction(&mut rng, m, false);
            if singular_values(&(&q * &b + &p))[m - 1] < MIN_TRANSFORM_SV {
                continue;
            }
            let a0 = pg_coeffs(std::slice::from_ref(&b), j, &tol)?.remove(0);
            break PotapovSeq::new(j.clone(), vec![a0], tol)?;
        }
    } else {
        let strict = random_strict_seq(m, j, break_at - 1, rng.random(), 0.6)?;
        let k = random_boundary_contraction(&mut rng, m, false);
        strict.extend_with_parameter(&k)?
    };
    if seq.order() < n {
        seq = seq.extend_central(n - seq.order())?;
    }
    Ok(seq)
}

/// Deterministic random sequence of order `n` whose solution is unique
/// (`L_{n+1} = R_{n+1} = 0`).
pub fn random_unique_seq(m: usize, j: &SignatureMatrix, n: usize, seed: u64) -> Result<PotapovSeq> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0dd_1e55);
    if n == 0 {
        let (p, q) = (j.p_proj(), j.q_proj());
        loop {
            let u = random_boundary_contraction(&mut rng, m, true);
            if singular_values(&(&q * &u + &p))[m - 1] < MIN_TRANSFORM_SV {
                continue;
            }
            let a0 = pg_coeffs(std::slice::from_ref(&u), j, &Tolerances::default())?.remove(0);
            return PotapovSeq::with_default_tol(j.clone(), vec![a0]);
        }
    }
    let strict = random_strict_seq(m, j, n - 1, rng.random(), 0.6)?;
    let u = random_boundary_contraction(&mut rng, m, true);
    strict.extend_with_parameter(&u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkernel::{identity, max_abs};

    fn scalar(x: f64) -> CMatrix {
        CMatrix::from_element(1, 1, c(x, 0.0))
    }

    fn seq1(j: f64, a: &[f64]) -> PotapovSeq {
        PotapovSeq::with_default_tol(
            SignatureMatrix::from_diag(&[j]).unwrap(),
            a.iter().map(|&x| scalar(x)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn toeplitz_layout() {
        let s = seq1(1.0, &[0.0, 1.0]).block_toeplitz();
        let expect = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., 0.), c(1., 0.), c(0., 0.)]);
        assert_eq!(s, expect);
        assert_eq!(seq1(1.0, &[0.3]).block_toeplitz(), scalar(0.3));
    }

    #[test]
    fn defect_examples() {
        let (p, q) = seq1(1.0, &[0.0]).defect_matrices();
        assert_eq!((p, q), (scalar(1.0), scalar(1.0)));
        let (p, q) = seq1(-1.0, &[2.0]).defect_matrices();
        assert!((p[(0, 0)].re - 3.0).abs() < 1e-14 && (q[(0, 0)].re - 3.0).abs() < 1e-14);
    }

    #[test]
    fn ball_examples() {
        let b = seq1(1.0, &[0.5]).ball_parameters().unwrap().clone();
        assert!(max_abs(&b.center) == 0.0);
        assert!((b.left[(0, 0)].re - 0.75).abs() < 1e-15);
        assert!((b.right[(0, 0)].re - 0.75).abs() < 1e-15);
        let b = seq1(-1.0, &[2.0]).ball_parameters().unwrap().clone();
        assert!((b.left[(0, 0)].re - 3.0).abs() < 1e-14);
        let j = SignatureMatrix::standard(1, 1);
        let s = PotapovSeq::with_default_tol(j, vec![identity(2)]).unwrap();
        let b = s.ball_parameters().unwrap();
        assert!(max_abs(&b.left) < 1e-15 && max_abs(&b.right) < 1e-15);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            seq1(1.0, &[0.0, 0.5]).classification(),
            Classification::Strict
        );
        assert_eq!(seq1(1.0, &[2.0]).classification(), Classification::Invalid);
        let j = SignatureMatrix::standard(2, 1);
        let s = PotapovSeq::with_default_tol(j, vec![identity(3)]).unwrap();
        assert_eq!(s.classification(), Classification::Degenerate);
        assert_eq!(
            seq1(1.0, &[2.0]).ball_parameters().unwrap_err(),
            Error::NotPotapov
        );
    }

    #[test]
    fn central_extension_examples() {
        let e = seq1(1.0, &[0.0]).extend_central(3).unwrap();
        assert_eq!(e.order(), 3);
        assert!(e.coeffs().iter().all(|a| max_abs(a) == 0.0));
        let e = seq1(-1.0, &[2.0]).extend_central(1).unwrap();
        assert!((e.coeff(0)[(0, 0)].re - 2.0).abs() < 1e-15 && max_abs(e.coeff(1)) < 1e-15);
        let j = SignatureMatrix::standard(1, 1);
        let e = PotapovSeq::with_default_tol(j, vec![identity(2)])
            .unwrap()
            .extend_central(2)
            .unwrap();
        assert!(max_abs(e.coeff(1)) < 1e-15 && max_abs(e.coeff(2)) < 1e-15);
        assert!(e.is_potapov());
    }

    #[test]
    fn parameter_extension_examples() {
        let e = seq1(1.0, &[0.5])
            .extend_with_parameter(&scalar(0.5))
            .unwrap();
        assert!((e.coeff(1)[(0, 0)].re - 0.375).abs() < 1e-15);
        assert!(e.is_strict());
        let e = seq1(1.0, &[0.0])
            .extend_with_parameter(&scalar(1.0))
            .unwrap();
        assert_eq!(e.classification(), Classification::Degenerate);
        assert!(matches!(
            seq1(1.0, &[0.0]).extend_with_parameter(&scalar(1.5)),
            Err(Error::NotContractive(_))
        ));
    }

    #[test]
    fn pg_examples() {
        let b = seq1(-1.0, &[2.0]).pg_transform().unwrap();
        assert!((b.coeff(0)[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!(b.signature().is_identity());
        let s = seq1(1.0, &[0.3, 0.2]);
        assert_eq!(s.pg_transform().unwrap().coeffs(), s.coeffs());
    }

    #[test]
    fn random_seq_is_deterministic_and_strict() {
        let j = SignatureMatrix::standard(1, 2);
        let a = random_strict_seq(3, &j, 4, 11, 0.6).unwrap();
        let b = random_strict_seq(3, &j, 4, 11, 0.6).unwrap();
        assert_eq!(a.coeffs(), b.coeffs());
        assert!(a.is_strict());
        let z = random_strict_seq(3, &j, 3, 5, 0.0).unwrap();
        let central = z.prefix(0).extend_central(3).unwrap();
        assert_eq!(z.coeffs(), central.coeffs());
    }

    #[test]
    fn random_degenerate_and_unique() {
        let j = SignatureMatrix::standard(1, 1);
        for seed in 0..10 {
            let d = random_degenerate_seq(2, &j, 3, seed).unwrap();
            assert_eq!(
                d.classification(),
                Classification::Degenerate,
                "seed {seed}"
            );
            let u = random_unique_seq(2, &j, 2, seed).unwrap();
            let b = u.ball_parameters().unwrap();
            assert!(max_abs(&b.left) < 1e-9 && max_abs(&b.right) < 1e-9);
        }
    }
}
