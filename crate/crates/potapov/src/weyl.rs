//! Weyl matrix balls of strict sequences.
//!
//! At a point `w` of the common holomorphy set, the values `f(w)` of all
//! solutions fill the matrix ball `𝔎(𝓜(w); |w|^{n+1} √𝓛(w), √𝓡(w))`.
//! Degenerate sequences are rejected here.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matkernel::{
    eigenvalues_hermitian, hermitian_part, identity, inverse, max_abs, psd_sqrt, rank,
    singular_values, spectral_norm, CMatrix, SignatureMatrix, Tolerances,
};
use crate::polynomials::{four_polys_strict, inverse_sqrt_radii, FourPolys};
use crate::sequence::PotapovSeq;
use crate::solve::{lft_solution, RationalMatrixFn, SchurParam};

fn require_strict(seq: &PotapovSeq) -> Result<()> {
    if seq.is_strict() {
        Ok(())
    } else {
        Err(Error::NotStrict)
    }
}

/// `χ(w) = w √R ρ(w)⁻¹ J σ̃(w) √L⁻¹`.
pub fn chi(seq: &PotapovSeq, w: Complex64) -> Result<CMatrix> {
    require_strict(seq)?;
    let polys = four_polys_strict(seq)?;
    chi_from(seq, &polys, w)
}

fn chi_from(seq: &PotapovSeq, polys: &FourPolys, w: Complex64) -> Result<CMatrix> {
    let b = seq.ball_parameters()?;
    let (li, _) = inverse_sqrt_radii(seq)?;
    let rho_inv = inverse(&polys.rho.eval(w)).map_err(|_| Error::SingularDenominator)?;
    let jm = seq.signature().matrix();
    Ok((&b.sqrt_right * rho_inv * jm * polys.sigma_rec().eval(w) * li) * w)
}

/// The τ-based form `w √R⁻¹ π̃(w) J τ(w)⁻¹ √L`.
pub fn chi_alt(seq: &PotapovSeq, w: Complex64) -> Result<CMatrix> {
    require_strict(seq)?;
    let polys = four_polys_strict(seq)?;
    let b = seq.ball_parameters()?;
    let (_, ri) = inverse_sqrt_radii(seq)?;
    let tau_inv = inverse(&polys.tau.eval(w)).map_err(|_| Error::SingularDenominator)?;
    let jm = seq.signature().matrix();
    Ok((ri * polys.pi_rec().eval(w) * jm * tau_inv * &b.sqrt_left) * w)
}

/// Whether `w` lies in the common holomorphy set of all solutions.
pub fn in_common_holomorphy(seq: &PotapovSeq, w: Complex64) -> Result<bool> {
    require_strict(seq)?;
    let polys = four_polys_strict(seq)?;
    in_common_from(seq, &polys, w)
}

fn in_common_from(seq: &PotapovSeq, polys: &FourPolys, w: Complex64) -> Result<bool> {
    let eps = seq.tolerances().residual;
    if w.norm() >= 1.0 {
        return Ok(false);
    }
    let rho = polys.rho.eval(w);
    let sv = singular_values(&rho);
    if sv.last().copied().unwrap_or(0.0) <= eps * sv[0].max(1.0) {
        return Ok(false);
    }
    match chi_from(seq, polys, w) {
        Ok(x) => Ok(spectral_norm(&x) < 1.0 - eps),
        Err(Error::SingularDenominator) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Both closed forms of the holomorphy radius, capped at one.
pub fn r0_forms(seq: &PotapovSeq) -> Result<(f64, f64)> {
    let base = seq.prefix(0);
    require_strict(&base)?;
    if seq.signature().is_identity() {
        return Ok((1.0, 1.0));
    }
    let b = base.ball_parameters()?;
    let (li, ri) = inverse_sqrt_radii(&base)?;
    let jm = seq.signature().matrix();
    let a0h = seq.coeff(0).adjoint();
    let n1 = spectral_norm(&(&b.sqrt_right * jm * &a0h * li));
    let n2 = spectral_norm(&(ri * &a0h * jm * &b.sqrt_left));
    let inv = |n: f64| if n <= 1.0 { 1.0 } else { 1.0 / n };
    Ok((inv(n1), inv(n2)))
}

/// Radius of a disk around the origin contained in every common holomorphy set.
pub fn r0(seq: &PotapovSeq) -> Result<f64> {
    Ok(r0_forms(seq)?.0)
}

/// Weyl matrix ball at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylBall {
    pub w: Complex64,
    /// Order `n` of the generating sequence.
    pub order: usize,
    pub center: CMatrix,
    /// `|w|^{n+1} √𝓛`.
    pub lnorm: CMatrix,
    /// `√𝓡`.
    pub rhalf: CMatrix,
    /// `𝓛 = Φ⁻¹`.
    pub l: CMatrix,
    /// `𝓡 = Ψ⁻¹`.
    pub r: CMatrix,
    pub phi: CMatrix,
    pub psi: CMatrix,
    /// Center computed from the Ψ-based formula.
    pub center_alt: CMatrix,
}

pub fn weyl_ball(seq: &PotapovSeq, w: Complex64) -> Result<WeylBall> {
    require_strict(seq)?;
    let polys = four_polys_strict(seq)?;
    if !in_common_from(seq, &polys, w)? {
        return Err(Error::OutsideCommonDomain);
    }
    let tol = seq.tolerances();
    let b = seq.ball_parameters()?;
    let linv = inverse(&b.left).map_err(|_| Error::NotStrict)?;
    let rinv = inverse(&b.right).map_err(|_| Error::NotStrict)?;
    let jm = seq.signature().matrix();
    let (pi, rho, sigma, tau) = (
        polys.pi.eval(w),
        polys.rho.eval(w),
        polys.sigma.eval(w),
        polys.tau.eval(w),
    );
    let (pit, rhot, sigt, taut) = (
        polys.pi_rec().eval(w),
        polys.rho_rec().eval(w),
        polys.sigma_rec().eval(w),
        polys.tau_rec().eval(w),
    );
    let w2 = w.norm_sqr();
    let phi = hermitian_part(
        &(tau.adjoint() * &linv * &tau - (jm * pit.adjoint() * &rinv * &pit * jm).scale(w2)),
    );
    let psi = hermitian_part(
        &(&rho * &rinv * rho.adjoint() - (jm * &sigt * &linv * sigt.adjoint() * jm).scale(w2)),
    );
    let l = hermitian_part(&inverse(&phi).map_err(|_| Error::SingularRadius)?);
    let r = hermitian_part(&inverse(&psi).map_err(|_| Error::SingularRadius)?);
    let center =
        &l * (tau.adjoint() * &linv * &sigma - (jm * pit.adjoint() * &rinv * &rhot * jm).scale(w2));
    let center_alt =
        (&pi * &rinv * rho.adjoint() - (jm * &taut * &linv * sigt.adjoint() * jm).scale(w2)) * &r;
    let scale = w.norm().powi(seq.order() as i32 + 1);
    Ok(WeylBall {
        w,
        order: seq.order(),
        center,
        lnorm: psd_sqrt(&l, tol)?.scale(scale),
        rhalf: psd_sqrt(&r, tol)?,
        l,
        r,
        phi,
        psi,
        center_alt,
    })
}

/// `‖lnorm⁻¹ (X - M) rhalf⁻¹‖`; at most one for members of the ball.
///
/// At `w = 0` the ball is the single point `M`: the result is zero if `X`
/// matches it within the residual and infinite otherwise.
pub fn ball_membership(ball: &WeylBall, x: &CMatrix, tol: &Tolerances) -> Result<f64> {
    let d = x - &ball.center;
    if ball.w.norm() == 0.0 {
        return Ok(if max_abs(&d) <= tol.residual {
            0.0
        } else {
            f64::INFINITY
        });
    }
    let li = inverse(&ball.lnorm).map_err(|_| Error::SingularRadius)?;
    let ri = inverse(&ball.rhalf).map_err(|_| Error::SingularRadius)?;
    Ok(spectral_norm(&(li * d * ri)))
}

/// Ball on the J side obtained from the ball of the transformed Schur sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct PgTransfer {
    pub l: CMatrix,
    pub r: CMatrix,
    /// Center from the formula ending in `𝓡_J`.
    pub center: CMatrix,
    /// Center from the formula starting with `𝓛_J`.
    pub center_alt: CMatrix,
}

impl PgTransfer {
    /// Packs the transferred data as a ball at the same point and order.
    pub fn into_ball(self, schur: &WeylBall, tol: &Tolerances) -> Result<WeylBall> {
        let scale = schur.w.norm().powi(schur.order as i32 + 1);
        let phi = inverse(&self.l).map_err(|_| Error::SingularTransfer)?;
        let psi = inverse(&self.r).map_err(|_| Error::SingularTransfer)?;
        Ok(WeylBall {
            w: schur.w,
            order: schur.order,
            lnorm: psd_sqrt(&self.l, tol)?.scale(scale),
            rhalf: psd_sqrt(&self.r, tol)?,
            center: self.center,
            center_alt: self.center_alt,
            l: self.l,
            r: self.r,
            phi,
            psi,
        })
    }
}

/// Maps the Weyl ball of the J-PG transformed Schur sequence to the J side.
pub fn pg_ball_transfer(schur: &WeylBall, j: &SignatureMatrix) -> Result<PgTransfer> {
    let (p, q) = (j.p_proj(), j.q_proj());
    let m = &schur.center;
    let wn = schur.w.norm().powi(2 * (schur.order as i32 + 1));
    let lin = &schur.phi;
    let rin = &schur.psi;
    let a = m * &q - &p;
    let bq = &q * m + &p;
    if inverse(&bq).is_err() || inverse(&a).is_err() {
        return Err(Error::SingularTransfer);
    }
    let lj = hermitian_part(
        &inverse(&(a.adjoint() * lin * &a - (&q * &schur.r * &q).scale(wn)))
            .map_err(|_| Error::SingularTransfer)?,
    );
    // The subtracted term is 𝐐𝓛𝐐; with 𝐏𝓛𝐏 the J = I case would not reduce to the identity.
    let rj = hermitian_part(
        &inverse(&(&bq * rin * bq.adjoint() - (&q * &schur.l * &q).scale(wn)))
            .map_err(|_| Error::SingularTransfer)?,
    );
    let center = ((&p * m + &q) * rin * bq.adjoint() - (&p * &schur.l * &q).scale(wn)) * &rj;
    let center_alt = &lj * (a.adjoint() * lin * (&q - m * &p) + (&q * &schur.r * &p).scale(wn));
    Ok(PgTransfer {
        l: lj,
        r: rj,
        center,
        center_alt,
    })
}

/// Solution whose value at `w` lies on the boundary of every later ball.
///
/// `f_w = f_S` with the constant parameter `S = -χ(w)*`.
pub fn extremal_function(seq: &PotapovSeq, w: Complex64) -> Result<RationalMatrixFn> {
    if !in_common_holomorphy(seq, w)? {
        return Err(Error::OutsideCommonDomain);
    }
    let x = chi(seq, w)?;
    lft_solution(seq, &SchurParam::Constant(-x.adjoint()))
}

/// Next coefficient `M - √L χ(w)* √R` of the extremal extension.
pub fn extremal_coefficient(seq: &PotapovSeq, w: Complex64) -> Result<CMatrix> {
    if !in_common_holomorphy(seq, w)? {
        return Err(Error::OutsideCommonDomain);
    }
    let x = chi(seq, w)?;
    Ok(seq.ball_parameters()?.point(&(-x.adjoint())))
}

/// Extends `seq` to order `order`, choosing each new coefficient extremal at `w`.
///
/// Along such a tower the semi-radii at `w` stay constant.
pub fn extremal_tower(seq: &PotapovSeq, w: Complex64, order: usize) -> Result<PotapovSeq> {
    let mut cur = seq.clone();
    while cur.order() < order {
        let next = extremal_coefficient(&cur, w)?;
        cur = cur.push(next)?;
    }
    Ok(cur)
}

/// One order of a limit study.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitRow {
    pub order: usize,
    pub center: CMatrix,
    pub l: CMatrix,
    pub r: CMatrix,
    pub eig_l: Vec<f64>,
    pub eig_r: Vec<f64>,
    pub rank_l: usize,
    pub rank_r: usize,
}

/// Ball parameters of successive prefixes at a fixed point.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitTable {
    pub w: Complex64,
    pub rows: Vec<LimitRow>,
    /// First order from which `𝓛` stayed put for three consecutive steps.
    pub stagnation_order: Option<usize>,
    /// Limits of the semi-radii predicted from the Schur side, `(𝓛_J, 𝓡_J)`.
    pub pg_limits: Option<(CMatrix, CMatrix)>,
}

/// Step size under which `𝓛` is considered stagnant.
pub const STAGNATION_STEP: f64 = 1e-9;

impl LimitTable {
    pub fn last(&self) -> &LimitRow {
        self.rows.last().expect("nonempty table")
    }
}

/// Ball parameters at `w` for every prefix from the first admissible order up to `n`.
pub fn limit_study(seq: &PotapovSeq, w: Complex64) -> Result<LimitTable> {
    require_strict(seq)?;
    let tol = *seq.tolerances();
    let mut rows = Vec::new();
    for k in 0..=seq.order() {
        let pre = seq.prefix(k);
        if !in_common_holomorphy(&pre, w)? {
            if rows.is_empty() {
                continue;
            }
            return Err(Error::OutsideCommonDomain);
        }
        let b = weyl_ball(&pre, w)?;
        rows.push(LimitRow {
            order: k,
            eig_l: eigenvalues_hermitian(&b.l),
            eig_r: eigenvalues_hermitian(&b.r),
            rank_l: rank(&b.l, &tol),
            rank_r: rank(&b.r, &tol),
            center: b.center,
            l: b.l,
            r: b.r,
        });
    }
    if rows.is_empty() {
        return Err(Error::OutsideCommonDomain);
    }
    let mut stagnation_order = None;
    let mut run = 0;
    for i in 1..rows.len() {
        if max_abs(&(&rows[i].l - &rows[i - 1].l)) <= STAGNATION_STEP {
            run += 1;
            if run == 3 && stagnation_order.is_none() {
                stagnation_order = Some(rows[i - 3].order);
            }
        } else {
            run = 0;
        }
    }
    let pg_limits = pg_limit_surrogates(seq, w).ok();
    Ok(LimitTable {
        w,
        rows,
        stagnation_order,
        pg_limits,
    })
}

/// `(g𝐐 - 𝐏)⁻¹ 𝓛 (g𝐐 - 𝐏)⁻*` and `(𝐐g + 𝐏)⁻* 𝓡 (𝐐g + 𝐏)⁻¹` from the Schur-side
/// ball of the transformed sequence, with `g(w)` replaced by its center.
pub fn pg_limit_surrogates(seq: &PotapovSeq, w: Complex64) -> Result<(CMatrix, CMatrix)> {
    let schur = seq.pg_transform()?;
    let b = weyl_ball(&schur, w)?;
    let j = seq.signature();
    let (p, q) = (j.p_proj(), j.q_proj());
    let g = &b.center;
    let a = inverse(&(g * &q - &p)).map_err(|_| Error::SingularTransfer)?;
    let bb = inverse(&(&q * g + &p)).map_err(|_| Error::SingularTransfer)?;
    let lj = hermitian_part(&(&a * &b.l * a.adjoint()));
    let rj = hermitian_part(&(bb.adjoint() * &b.r * &bb));
    Ok((lj, rj))
}

/// `diag(I, -I)` of size `2m`.
pub fn j_box(m: usize) -> CMatrix {
    crate::matkernel::block_diag2(&identity(m), &(-identity(m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkernel::c;

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
    fn chi_examples() {
        let s = seq1(-1.0, &[2.0]);
        assert!(max_abs(&chi(&s, c(0.0, 0.0)).unwrap()) == 0.0);
        let w = c(0.3, 0.1);
        assert!((chi(&s, w).unwrap()[(0, 0)] + w * 2.0).norm() < 1e-14);
        assert!((chi_alt(&s, w).unwrap()[(0, 0)] + w * 2.0).norm() < 1e-14);
        assert!(max_abs(&chi(&seq1(1.0, &[0.0]), w).unwrap()) == 0.0);
    }

    #[test]
    fn holomorphy_examples() {
        let s = seq1(-1.0, &[2.0]);
        assert!(in_common_holomorphy(&s, c(0.0, 0.0)).unwrap());
        assert!(in_common_holomorphy(&s, c(0.4, 0.0)).unwrap());
        assert!(!in_common_holomorphy(&s, c(0.6, 0.0)).unwrap());
        assert!((r0(&s).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(r0(&seq1(1.0, &[0.3])).unwrap(), 1.0);
    }

    #[test]
    fn schwarz_ball() {
        let s = seq1(1.0, &[0.0]);
        let w = c(0.3, -0.4);
        let b = weyl_ball(&s, w).unwrap();
        assert!(max_abs(&b.center) < 1e-15);
        assert!((b.lnorm[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((b.rhalf[(0, 0)].re - 1.0).abs() < 1e-15);
        let t = Tolerances::default();
        let x = CMatrix::from_element(1, 1, w);
        assert!((ball_membership(&b, &x, &t).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ball_at_origin_is_a_point() {
        let s = seq1(-1.0, &[2.0, 0.3]);
        let b = weyl_ball(&s, c(0.0, 0.0)).unwrap();
        assert!((b.center[(0, 0)].re - 2.0).abs() < 1e-14);
        let t = Tolerances::default();
        assert_eq!(ball_membership(&b, &scalar(2.0), &t).unwrap(), 0.0);
        assert!(ball_membership(&b, &scalar(2.1), &t).unwrap().is_infinite());
    }

    #[test]
    fn scalar_pg_transfer_at_origin() {
        let s = seq1(-1.0, &[2.0]);
        let schur = s.pg_transform().unwrap();
        let b = weyl_ball(&schur, c(0.0, 0.0)).unwrap();
        assert!((b.l[(0, 0)].re - 0.75).abs() < 1e-14);
        let t = pg_ball_transfer(&b, s.signature()).unwrap();
        assert!((t.l[(0, 0)].re - 3.0).abs() < 1e-13);
    }

    #[test]
    fn degenerate_sequences_are_rejected() {
        let s = seq1(1.0, &[1.0]);
        assert_eq!(weyl_ball(&s, c(0.1, 0.0)).unwrap_err(), Error::NotStrict);
    }
}
