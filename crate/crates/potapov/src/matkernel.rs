//! Dense complex matrix primitives with tolerance-aware rank decisions.
//!
//! Everything downstream works on `CMatrix = DMatrix<Complex64>`. Rank
//! decisions (pseudoinverse cutoff, semidefiniteness, residual checks) are
//! governed by a single [`Tolerances`] value.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix.
pub type CMatrix = DMatrix<Complex64>;

/// Shorthand for a complex scalar.
#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Numerical slack used by rank and sign decisions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative singular-value cutoff for pseudoinverses and ranks.
    pub rank_rel: f64,
    /// Negative-eigenvalue slack for semidefiniteness tests.
    pub psd_eig: f64,
    /// Slack for identity checks.
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank_rel: 1e-12,
            psd_eig: 1e-10,
            residual: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn new(rank_rel: f64, psd_eig: f64, residual: f64) -> Result<Self> {
        let t = Tolerances {
            rank_rel,
            psd_eig,
            residual,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(self.rank_rel) && ok(self.psd_eig) && ok(self.residual) {
            Ok(())
        } else {
            Err(Error::Parse(
                "tolerances must be finite and positive".into(),
            ))
        }
    }
}

/// Hermitian involution `J` (`J* = J`, `J² = I`).
#[derive(Clone, Debug, PartialEq)]
pub struct SignatureMatrix {
    mat: CMatrix,
}

/// Symmetry slack used when validating a signature matrix.
pub const TOL_SYM: f64 = 1e-12;

impl SignatureMatrix {
    /// Validates `mat` as a signature matrix.
    pub fn new(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() || mat.nrows() == 0 {
            return Err(Error::InvalidSignature(
                "matrix must be square and nonempty".into(),
            ));
        }
        let m = mat.nrows();
        if max_abs(&(&mat - mat.adjoint())) > TOL_SYM {
            return Err(Error::InvalidSignature("not Hermitian".into()));
        }
        if max_abs(&(&mat * &mat - identity(m))) > TOL_SYM {
            return Err(Error::InvalidSignature("not an involution".into()));
        }
        Ok(SignatureMatrix { mat })
    }

    /// Diagonal signature matrix from a list of ±1 entries.
    pub fn from_diag(signs: &[f64]) -> Result<Self> {
        if signs.iter().any(|s| (s.abs() - 1.0).abs() > TOL_SYM) {
            return Err(Error::InvalidSignature(
                "diagonal entries must be +1 or -1".into(),
            ));
        }
        let d: Vec<Complex64> = signs.iter().map(|&s| c(s, 0.0)).collect();
        Self::new(CMatrix::from_diagonal(&nalgebra::DVector::from_vec(d)))
    }

    pub fn identity(m: usize) -> Self {
        SignatureMatrix { mat: identity(m) }
    }

    /// `diag(I_p, -I_q)`.
    pub fn standard(p: usize, q: usize) -> Self {
        let mut signs = vec![1.0; p];
        signs.extend(std::iter::repeat_n(-1.0, q));
        Self::from_diag(&signs).expect("standard signature")
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn is_identity(&self) -> bool {
        max_abs(&(&self.mat - identity(self.dim()))) <= TOL_SYM
    }

    /// `diag(J, ..., J)` with `count` copies.
    pub fn block_diag(&self, count: usize) -> SignatureMatrix {
        let m = self.dim();
        let mut out = zeros(m * count, m * count);
        for k in 0..count {
            set_block(&mut out, k * m, k * m, &self.mat);
        }
        SignatureMatrix { mat: out }
    }

    /// Projection onto the positive eigenspace, `(I + J) / 2`.
    pub fn p_proj(&self) -> CMatrix {
        (identity(self.dim()) + &self.mat).scale(0.5)
    }

    /// Projection onto the negative eigenspace, `(I - J) / 2`.
    pub fn q_proj(&self) -> CMatrix {
        (identity(self.dim()) - &self.mat).scale(0.5)
    }
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> CMatrix {
    CMatrix::zeros(r, c)
}

/// Largest entry modulus; zero for empty matrices.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Copy of the `rows × cols` block starting at `(r, c)`.
pub fn block(m: &CMatrix, r: usize, c: usize, rows: usize, cols: usize) -> CMatrix {
    m.view((r, c), (rows, cols)).into_owned()
}

pub fn set_block(m: &mut CMatrix, r: usize, c: usize, b: &CMatrix) {
    m.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
}

/// `[[a, b], [c, d]]` from four equally sized square blocks.
pub fn block2x2(a: &CMatrix, b: &CMatrix, cc: &CMatrix, d: &CMatrix) -> CMatrix {
    let (p, q) = (a.nrows(), a.ncols());
    let mut out = zeros(p + cc.nrows(), q + b.ncols());
    set_block(&mut out, 0, 0, a);
    set_block(&mut out, 0, q, b);
    set_block(&mut out, p, 0, cc);
    set_block(&mut out, p, q, d);
    out
}

/// Block diagonal matrix `diag(a, b)`.
pub fn block_diag2(a: &CMatrix, b: &CMatrix) -> CMatrix {
    block2x2(
        a,
        &zeros(a.nrows(), b.ncols()),
        &zeros(b.nrows(), a.ncols()),
        b,
    )
}

/// `(H + H*) / 2`.
pub fn hermitian_part(h: &CMatrix) -> CMatrix {
    (h + h.adjoint()).scale(0.5)
}

/// Eigenvalues (ascending) and eigenvectors of the Hermitian part of `h`.
pub fn eig_hermitian(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.nrows();
    if n == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    let eig = hermitian_part(h).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vecs.set_column(k, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Ascending eigenvalues of the Hermitian part of `h`.
pub fn eigenvalues_hermitian(h: &CMatrix) -> Vec<f64> {
    eig_hermitian(h).0
}

/// Smallest eigenvalue of the Hermitian part of `h`.
pub fn min_eigenvalue(h: &CMatrix) -> f64 {
    eigenvalues_hermitian(h).first().copied().unwrap_or(0.0)
}

/// Thin singular value decomposition `(σ, U, V)` with `σ` descending.
///
/// Computed from the eigendecomposition of the Hermitian dilation
/// `[[0, A], [A*, 0]]`, whose eigenvalues are `±σ_i` with eigenvectors
/// `(u_i, ±v_i) / √2`. The dilation route keeps singular vectors accurate
/// where a direct complex SVD can lose them.
pub fn svd(m: &CMatrix) -> (Vec<f64>, CMatrix, CMatrix) {
    let (r, cn) = m.shape();
    let k = r.min(cn);
    if k == 0 {
        return (Vec::new(), zeros(r, 0), zeros(cn, 0));
    }
    let mut h = zeros(r + cn, r + cn);
    set_block(&mut h, 0, r, m);
    set_block(&mut h, r, 0, &m.adjoint());
    let (vals, vecs) = eig_hermitian(&h);
    let n = r + cn;
    let mut s = Vec::with_capacity(k);
    let mut u = zeros(r, k);
    let mut v = zeros(cn, k);
    let root2 = c(std::f64::consts::SQRT_2, 0.0);
    for i in 0..k {
        let col = vecs.column(n - 1 - i);
        s.push(vals[n - 1 - i].max(0.0));
        u.set_column(i, &(col.rows(0, r) * root2));
        v.set_column(i, &(col.rows(r, cn) * root2));
    }
    (s, u, v)
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    svd(m).0
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

fn rank_cutoff(m: &CMatrix, smax: f64, tol: &Tolerances) -> f64 {
    tol.rank_rel * smax * m.nrows().max(m.ncols()) as f64
}

/// Numerical rank at the `rank_rel` cutoff.
pub fn rank(m: &CMatrix, tol: &Tolerances) -> usize {
    let s = singular_values(m);
    let smax = s.first().copied().unwrap_or(0.0);
    let cut = rank_cutoff(m, smax, tol);
    s.iter().filter(|&&x| x > cut && x > 0.0).count()
}

/// Moore-Penrose pseudoinverse via the singular value decomposition.
///
/// Singular values below `rank_rel * σ_max * max(rows, cols)` are treated as zero.
pub fn pinv(m: &CMatrix, tol: &Tolerances) -> CMatrix {
    let (r, cn) = m.shape();
    if m.is_empty() {
        return zeros(cn, r);
    }
    let (sv, u, v) = svd(m);
    let smax = sv.first().copied().unwrap_or(0.0);
    let cut = rank_cutoff(m, smax, tol);
    let mut out = zeros(cn, r);
    for (k, &s) in sv.iter().enumerate() {
        if s > cut && s > 0.0 {
            out += (v.column(k) * u.column(k).adjoint()).scale(1.0 / s);
        }
    }
    out
}

/// Hermitian positive semidefinite square root.
///
/// Eigenvalues in `[-psd_eig, 0)` are clamped to zero; anything more
/// negative is rejected.
pub fn psd_sqrt(h: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    psd_fn(h, tol, f64::sqrt)
}

/// `(√H, √H⁺)` for a Hermitian semidefinite `H`.
///
/// Eigenvalues of `H` at or below the rank cutoff are treated as zero in both
/// factors, so `√H √H⁺` is an orthogonal projection. Cutting on the scale of
/// `H` matters: a rounding-level eigenvalue `ε` of `H` becomes `√ε` in `√H`,
/// which a cutoff on the scale of `√H` would keep and amplify.
pub fn psd_sqrt_with_pinv(h: &CMatrix, tol: &Tolerances) -> Result<(CMatrix, CMatrix)> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch("expected a square matrix".into()));
    }
    let (vals, vecs) = eig_hermitian(h);
    if let Some(&lo) = vals.first() {
        if lo < -tol.psd_eig {
            return Err(Error::NotPsd(lo));
        }
    }
    let top = vals.last().copied().unwrap_or(0.0).max(0.0);
    let cut = rank_cutoff(h, top, tol);
    let keep = |v: f64| v > cut && v > 0.0;
    let diag = |f: &dyn Fn(f64) -> f64| {
        let d: Vec<Complex64> = vals
            .iter()
            .map(|&v| c(if keep(v) { f(v) } else { 0.0 }, 0.0))
            .collect();
        &vecs * CMatrix::from_diagonal(&nalgebra::DVector::from_vec(d)) * vecs.adjoint()
    };
    Ok((diag(&f64::sqrt), diag(&|v: f64| 1.0 / v.sqrt())))
}

/// Applies `f` to the eigenvalues of a Hermitian semidefinite matrix.
fn psd_fn(h: &CMatrix, tol: &Tolerances, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch("expected a square matrix".into()));
    }
    let (vals, vecs) = eig_hermitian(h);
    if let Some(&lo) = vals.first() {
        if lo < -tol.psd_eig {
            return Err(Error::NotPsd(lo));
        }
    }
    let d: Vec<Complex64> = vals.iter().map(|&v| c(f(v.max(0.0)), 0.0)).collect();
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(d));
    Ok(&vecs * d * vecs.adjoint())
}

/// Inverse of a square matrix; fails if singular to working precision.
pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(
            "inverse of a non-square matrix".into(),
        ));
    }
    let s = singular_values(m);
    let (hi, lo) = (
        s.first().copied().unwrap_or(0.0),
        s.last().copied().unwrap_or(0.0),
    );
    if lo == 0.0 || lo <= hi * 1e-15 {
        return Err(Error::Singular);
    }
    m.clone().try_inverse().ok_or(Error::Singular)
}

pub fn det(m: &CMatrix) -> Complex64 {
    m.determinant()
}

/// Sign classification of `J - A* J A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Contractivity {
    Strict,
    Boundary,
    No,
}

/// Classifies `A` by the smallest eigenvalue of `J - A* J A`.
pub fn j_contractivity(
    a: &CMatrix,
    j: &SignatureMatrix,
    tol: &Tolerances,
) -> Result<Contractivity> {
    check_square_like(a, j)?;
    let jm = j.matrix();
    let lo = min_eigenvalue(&(jm - a.adjoint() * jm * a));
    Ok(if lo > tol.psd_eig {
        Contractivity::Strict
    } else if lo >= -tol.psd_eig {
        Contractivity::Boundary
    } else {
        Contractivity::No
    })
}

/// Whether `A* J A = J` within `residual · ‖J‖`.
pub fn is_j_unitary(a: &CMatrix, j: &SignatureMatrix, tol: &Tolerances) -> Result<bool> {
    check_square_like(a, j)?;
    let jm = j.matrix();
    let defect = spectral_norm(&(a.adjoint() * jm * a - jm));
    Ok(defect <= tol.residual * spectral_norm(jm))
}

fn check_square_like(a: &CMatrix, j: &SignatureMatrix) -> Result<()> {
    if a.nrows() != j.dim() || a.ncols() != j.dim() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, signature is {}x{}",
            a.nrows(),
            a.ncols(),
            j.dim(),
            j.dim()
        )));
    }
    Ok(())
}
