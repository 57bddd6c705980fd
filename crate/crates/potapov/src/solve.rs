//! Solutions of the interpolation problem.
//!
//! Every J-Potapov function with prescribed Taylor coefficients `A_0..A_n` is
//! `f_S = (wJτ̃ √L⁺ S √R + π)(wJσ̃ √L⁺ S √R + ρ)⁻¹` for a Schur function `S`.
//! Parameters are restricted to constants and matrix polynomials so every
//! solution stays an exact quotient of matrix polynomials.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matkernel::{
    c, det, identity, inverse, is_j_unitary, max_abs, pinv, singular_values, spectral_norm,
    CMatrix, SignatureMatrix, Tolerances,
};
use crate::polynomials::{four_polys_general, FourPolys, MatrixPoly};
use crate::sequence::{classify_coeffs, Classification, PotapovSeq};

/// Side on which the denominator is inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `f = num · den⁻¹`.
    Left,
    /// `f = den⁻¹ · num`.
    Right,
}

impl Orientation {
    pub fn name(&self) -> &'static str {
        match self {
            Orientation::Left => "left",
            Orientation::Right => "right",
        }
    }
}

/// Quotient of two matrix polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatrixFn {
    pub num: MatrixPoly,
    pub den: MatrixPoly,
    pub orientation: Orientation,
}

impl RationalMatrixFn {
    pub fn new(num: MatrixPoly, den: MatrixPoly, orientation: Orientation) -> Self {
        RationalMatrixFn {
            num,
            den,
            orientation,
        }
    }

    /// Constant function.
    pub fn constant(a: CMatrix) -> Self {
        let m = a.ncols();
        Self::new(
            MatrixPoly::constant(a),
            MatrixPoly::identity(m),
            Orientation::Left,
        )
    }

    pub fn eval(&self, w: Complex64) -> Result<CMatrix> {
        let d = inverse(&self.den.eval(w)).map_err(|_| Error::SingularDenominator)?;
        let n = self.num.eval(w);
        Ok(match self.orientation {
            Orientation::Left => n * d,
            Orientation::Right => d * n,
        })
    }

    /// Smallest singular value of the denominator at `w`.
    pub fn den_smallest_sv(&self, w: Complex64) -> f64 {
        singular_values(&self.den.eval(w))
            .last()
            .copied()
            .unwrap_or(0.0)
    }

    /// First `k + 1` Taylor coefficients at the origin.
    pub fn taylor_coeffs(&self, k: usize) -> Result<Vec<CMatrix>> {
        taylor_coeffs(self, k)
    }
}

/// Free contractive parameter of the solution set.
#[derive(Clone, Debug, PartialEq)]
pub enum SchurParam {
    Constant(CMatrix),
    Poly(MatrixPoly),
}

/// Boundary samples used to bound the sup-norm of a polynomial parameter.
const PARAM_SAMPLES: usize = 64;

impl SchurParam {
    pub fn zero(m: usize) -> Self {
        SchurParam::Constant(crate::matkernel::zeros(m, m))
    }

    pub fn as_poly(&self) -> MatrixPoly {
        match self {
            SchurParam::Constant(k) => MatrixPoly::constant(k.clone()),
            SchurParam::Poly(p) => p.clone(),
        }
    }

    pub fn eval(&self, w: Complex64) -> CMatrix {
        match self {
            SchurParam::Constant(k) => k.clone(),
            SchurParam::Poly(p) => p.eval(w),
        }
    }

    /// Checks size and contractivity.
    ///
    /// A polynomial parameter must have a Schur coefficient sequence and norm
    /// at most one on sampled boundary points.
    pub fn validate(&self, m: usize, tol: &Tolerances) -> Result<()> {
        let poly = self.as_poly();
        if poly.rows() != m || poly.cols() != m {
            return Err(Error::InvalidParam(format!("parameter must be {m}x{m}")));
        }
        match self {
            SchurParam::Constant(k) => {
                let n = spectral_norm(k);
                if n > 1.0 + tol.residual {
                    return Err(Error::InvalidParam(format!("norm {n} exceeds one")));
                }
            }
            SchurParam::Poly(p) => {
                let coeffs = p.coeffs().to_vec();
                let class = classify_coeffs(&SignatureMatrix::identity(m), &coeffs, tol);
                if class == Classification::Invalid {
                    return Err(Error::InvalidParam(
                        "coefficients are not a Schur sequence".into(),
                    ));
                }
                for k in 0..PARAM_SAMPLES {
                    let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / PARAM_SAMPLES as f64);
                    let n = spectral_norm(&p.eval(z));
                    if n > 1.0 + tol.residual {
                        return Err(Error::InvalidParam(format!(
                            "boundary norm {n} exceeds one"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Central function in both quotient forms: `(π ρ⁻¹, τ⁻¹ σ)`.
pub fn central_function(seq: &PotapovSeq) -> Result<(RationalMatrixFn, RationalMatrixFn)> {
    let polys = four_polys_general(seq)?;
    Ok(central_from_polys(&polys))
}

/// Central function built from any of the polynomial constructions.
pub fn central_from_polys(polys: &FourPolys) -> (RationalMatrixFn, RationalMatrixFn) {
    (
        RationalMatrixFn::new(polys.pi.clone(), polys.rho.clone(), Orientation::Left),
        RationalMatrixFn::new(polys.sigma.clone(), polys.tau.clone(), Orientation::Right),
    )
}

/// The solution `f_S` in left quotient form.
pub fn lft_solution(seq: &PotapovSeq, s: &SchurParam) -> Result<RationalMatrixFn> {
    let polys = four_polys_general(seq)?;
    s.validate(seq.m(), seq.tolerances())?;
    lft_from_polys(seq, &polys, s)
}

/// The solution `f_S` in right quotient form.
pub fn lft_solution_right(seq: &PotapovSeq, s: &SchurParam) -> Result<RationalMatrixFn> {
    let polys = four_polys_general(seq)?;
    s.validate(seq.m(), seq.tolerances())?;
    lft_right_from_polys(seq, &polys, s)
}

/// `(wJτ̃ √L⁺ S √R + π)(wJσ̃ √L⁺ S √R + ρ)⁻¹` for given polynomials.
pub fn lft_from_polys(
    seq: &PotapovSeq,
    polys: &FourPolys,
    s: &SchurParam,
) -> Result<RationalMatrixFn> {
    let ball = seq.ball_parameters()?;
    let jm = seq.signature().matrix();
    let inner = s
        .as_poly()
        .mul_left(&ball.sqrt_left_pinv)
        .mul_right(&ball.sqrt_right);
    let num = polys
        .tau_rec()
        .mul_left(jm)
        .mul(&inner)
        .shift(1)
        .add(&polys.pi);
    let den = polys
        .sigma_rec()
        .mul_left(jm)
        .mul(&inner)
        .shift(1)
        .add(&polys.rho);
    Ok(RationalMatrixFn::new(num, den, Orientation::Left))
}

/// `(w √L S √R⁺ π̃ J + τ)⁻¹ (w √L S √R⁺ ρ̃ J + σ)` for given polynomials.
pub fn lft_right_from_polys(
    seq: &PotapovSeq,
    polys: &FourPolys,
    s: &SchurParam,
) -> Result<RationalMatrixFn> {
    let ball = seq.ball_parameters()?;
    let jm = seq.signature().matrix();
    let inner = s
        .as_poly()
        .mul_left(&ball.sqrt_left)
        .mul_right(&ball.sqrt_right_pinv);
    let num = inner
        .mul(&polys.rho_rec().mul_right(jm))
        .shift(1)
        .add(&polys.sigma);
    let den = inner
        .mul(&polys.pi_rec().mul_right(jm))
        .shift(1)
        .add(&polys.tau);
    Ok(RationalMatrixFn::new(num, den, Orientation::Right))
}

/// Taylor coefficients `f_0..f_k` by power-series inversion of the denominator.
pub fn taylor_coeffs(f: &RationalMatrixFn, k: usize) -> Result<Vec<CMatrix>> {
    let d0inv = inverse(&f.den.coeff(0)).map_err(|_| Error::SingularAtOrigin)?;
    let mut inv: Vec<CMatrix> = Vec::with_capacity(k + 1);
    inv.push(d0inv.clone());
    for i in 1..=k {
        let mut acc = crate::matkernel::zeros(f.den.rows(), f.den.cols());
        match f.orientation {
            Orientation::Left => {
                for jj in 1..=i.min(f.den.coeffs().len() - 1) {
                    acc += f.den.coeff(jj) * &inv[i - jj];
                }
                inv.push(-(&d0inv * acc));
            }
            Orientation::Right => {
                for jj in 1..=i.min(f.den.coeffs().len() - 1) {
                    acc += &inv[i - jj] * f.den.coeff(jj);
                }
                inv.push(-(acc * &d0inv));
            }
        }
    }
    let out = (0..=k)
        .map(|i| {
            let mut acc = crate::matkernel::zeros(f.num.rows(), inv[0].ncols());
            for jj in 0..=i.min(f.num.coeffs().len() - 1) {
                match f.orientation {
                    Orientation::Left => acc += f.num.coeff(jj) * &inv[i - jj],
                    Orientation::Right => acc += &inv[i - jj] * f.num.coeff(jj),
                }
            }
            acc
        })
        .collect();
    Ok(out)
}

/// Outcome of the uniqueness test together with the central function.
#[derive(Clone, Debug, PartialEq)]
pub struct UniquenessReport {
    pub unique: bool,
    pub witness: RationalMatrixFn,
}

/// The solution is unique iff `L_{n+1} = 0` or `R_{n+1} = 0`.
pub fn uniqueness(seq: &PotapovSeq) -> Result<UniquenessReport> {
    let ball = seq.ball_parameters()?;
    let eps = seq.tolerances().residual;
    let unique = spectral_norm(&ball.left) <= eps || spectral_norm(&ball.right) <= eps;
    Ok(UniquenessReport {
        unique,
        witness: central_function(seq)?.0,
    })
}

/// `S♯ = L L⁺ S R⁺ R`, applied to every coefficient.
pub fn canonical_parameter(seq: &PotapovSeq, s: &SchurParam) -> Result<SchurParam> {
    let ball = seq.ball_parameters()?;
    let tol = seq.tolerances();
    let lp = &ball.left * pinv(&ball.left, tol);
    let rp = pinv(&ball.right, tol) * &ball.right;
    Ok(match s {
        SchurParam::Constant(k) => SchurParam::Constant(&lp * k * &rp),
        SchurParam::Poly(p) => SchurParam::Poly(p.mul_left(&lp).mul_right(&rp)),
    })
}

/// Whether `√L S_1 √R = √L S_2 √R` coefficientwise.
pub fn parameter_equivalence(seq: &PotapovSeq, s1: &SchurParam, s2: &SchurParam) -> Result<bool> {
    let ball = seq.ball_parameters()?;
    let a = s1
        .as_poly()
        .mul_left(&ball.sqrt_left)
        .mul_right(&ball.sqrt_right);
    let b = s2
        .as_poly()
        .mul_left(&ball.sqrt_left)
        .mul_right(&ball.sqrt_right);
    Ok(a.distance(&b) <= seq.tolerances().residual)
}

/// Minimum denominator singular value for a boundary sample to be used.
pub const POLE_GUARD: f64 = 1e-6;

/// Whether `f` takes J-unitary values at `samples` equispaced boundary points.
///
/// Points where the denominator is nearly singular are skipped.
pub fn j_unitary_boundary_test(
    f: &RationalMatrixFn,
    j: &SignatureMatrix,
    samples: usize,
    tol: &Tolerances,
) -> Result<bool> {
    let mut used = 0;
    let mut inner = true;
    for k in 0..samples {
        let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / samples as f64);
        if f.den_smallest_sv(z) < POLE_GUARD {
            continue;
        }
        used += 1;
        let v = f.eval(z)?;
        if !is_j_unitary(&v, j, tol)? {
            inner = false;
        }
    }
    if used == 0 {
        return Err(Error::AllSamplesSingular);
    }
    Ok(inner)
}

/// Sampled check that `π ρ⁻¹` is a finite Blaschke-Potapov product.
///
/// Condition (II), `det(𝐐π + 𝐏ρ) ≠ 0` in the disk, is tested on a polar grid
/// and by a zero winding number on the circle of radius 0.999; condition (III),
/// `ρ* J ρ = π* J π` on the unit circle, at boundary samples. Sampling does not
/// certify either condition.
pub fn bp_product_check(
    pi: &MatrixPoly,
    rho: &MatrixPoly,
    j: &SignatureMatrix,
    tol: &Tolerances,
) -> bool {
    let (p, q) = (j.p_proj(), j.q_proj());
    let jm = j.matrix();
    let g = |w: Complex64| det(&(&q * pi.eval(w) + &p * rho.eval(w)));
    let angles = 256;
    let radii = [
        0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 0.999,
    ];
    for &r in &radii {
        for k in 0..angles {
            let w = Complex64::from_polar(r, 2.0 * PI * k as f64 / angles as f64);
            if g(w).norm() <= tol.residual {
                return false;
            }
        }
    }
    let mut winding = 0.0;
    let mut prev = g(c(0.999, 0.0));
    for k in 1..=1024 {
        let w = Complex64::from_polar(0.999, 2.0 * PI * k as f64 / 1024.0);
        let cur = g(w);
        winding += (cur / prev).arg();
        prev = cur;
    }
    if (winding / (2.0 * PI)).abs() > 0.5 {
        return false;
    }
    (0..64).all(|k| {
        let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 64.0);
        let (a, b) = (rho.eval(z), pi.eval(z));
        let lhs = a.adjoint() * jm * &a;
        let rhs = b.adjoint() * jm * &b;
        let scale = 1.0 + max_abs(&lhs).max(max_abs(&rhs));
        max_abs(&(lhs - rhs)) <= tol.residual * scale
    })
}

/// Identity check helper: largest entry of `f(w) - g(w)` over the points.
pub fn max_distance(
    f: &RationalMatrixFn,
    g: &RationalMatrixFn,
    points: &[Complex64],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for &w in points {
        worst = worst.max(max_abs(&(f.eval(w)? - g.eval(w)?)));
    }
    Ok(worst)
}

/// `I_m` as a rational function.
pub fn identity_fn(m: usize) -> RationalMatrixFn {
    RationalMatrixFn::constant(identity(m))
}
