//! Seeded self-verification of the library invariants.
//!
//! Every check draws its own random instances from a seed, evaluates one
//! invariant and keeps the worst residual. Residuals are measured relative to
//! the size of the compared quantities, with a floor of one.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::io;
use crate::matkernel::{
    block_diag2, det, identity, max_abs, pinv, psd_sqrt, SignatureMatrix, Tolerances,
};
use crate::matkernel::{min_eigenvalue, CMatrix};
use crate::polynomials::{
    bp_factor, four_polys_general, four_polys_recursive, four_polys_strict, pg_link,
    resolvent_factors, resolvents, u_mm, BpKind,
};
use crate::sequence::{
    gaussian_matrix, random_degenerate_seq, random_strict_seq, random_with_norm, Classification,
    PotapovSeq,
};
use crate::solve::{central_from_polys, lft_solution, taylor_coeffs, SchurParam};
use crate::weyl::{
    ball_membership, chi, chi_alt, in_common_holomorphy, pg_ball_transfer, r0, weyl_ball,
};

/// `‖a - b‖_max / max(1, ‖a‖_max, ‖b‖_max)`.
pub fn rel_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a - b)) / 1f64.max(max_abs(a)).max(max_abs(b))
}

/// Random diagonal signature of size `m`.
pub fn random_signature(rng: &mut impl Rng, m: usize) -> SignatureMatrix {
    let signs: Vec<f64> = (0..m)
        .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
        .collect();
    SignatureMatrix::from_diag(&signs).expect("diagonal signs")
}

/// Uniform random point in the disk of radius `r`.
pub fn random_point(rng: &mut impl Rng, r: f64) -> Complex64 {
    let rad = r * rng.random::<f64>().sqrt();
    Complex64::from_polar(rad, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Random constant parameter with norm in `[0, max_norm]`.
pub fn random_param(rng: &mut impl Rng, m: usize, max_norm: f64) -> SchurParam {
    let n = rng.random_range(0.0..=max_norm);
    SchurParam::Constant(random_with_norm(rng, m, n))
}

/// Residuals of the polynomial identities of a strict sequence at `w`.
///
/// Returns pairs `(name, residual)` for
/// `τJτ̃ - σJσ̃ = wⁿL`, `ρ̃Jρ - π̃Jπ = wⁿR`, `τπ = σρ`, `det 𝔠 = w^{(n+1)m}`,
/// `𝔡U𝔠 = w^{n+1}U` and the factorizations of both resolvents.
pub fn polynomial_identities(seq: &PotapovSeq, w: Complex64) -> Result<Vec<(&'static str, f64)>> {
    let n = seq.order();
    let m = seq.m();
    let jm = seq.signature().matrix();
    let f = four_polys_strict(seq)?;
    let b = seq.ball_parameters()?;
    let wn = w.powi(n as i32);
    let (pi, rho, sigma, tau) = (f.pi.eval(w), f.rho.eval(w), f.sigma.eval(w), f.tau.eval(w));
    let (pit, rhot, sigt, taut) = (
        f.pi_rec().eval(w),
        f.rho_rec().eval(w),
        f.sigma_rec().eval(w),
        f.tau_rec().eval(w),
    );
    let left = &tau * jm * &taut - &sigma * jm * &sigt;
    let right = &rhot * jm * &rho - &pit * jm * &pi;
    let res = resolvents(seq)?;
    let c = res.c.eval(w);
    let d = res.d.eval(w);
    let u = u_mm(m);
    let dc = det(&c);
    let expect = w.powi(((n + 1) * m) as i32);
    let fac = resolvent_factors(seq)?;
    Ok(vec![
        ("tau_sigma", rel_diff(&left, &(&b.left * wn))),
        ("rho_pi", rel_diff(&right, &(&b.right * wn))),
        ("cross", rel_diff(&(&tau * &pi), &(&sigma * &rho))),
        ("det", (dc - expect).norm() / 1f64.max(dc.norm())),
        (
            "dual",
            rel_diff(&(&d * &u * &c), &(&u * w.powi(n as i32 + 1))),
        ),
        ("factor_c", rel_diff(&fac.product_c().eval(w), &c)),
        ("factor_d", rel_diff(&fac.product_d().eval(w), &d)),
    ])
}

/// `𝔠(z)* diag(J, -J) 𝔠(z) = diag(I, -I)` at a point `z` of the unit circle.
pub fn boundary_identity(seq: &PotapovSeq, z: Complex64) -> Result<f64> {
    let m = seq.m();
    let jm = seq.signature().matrix();
    let c = resolvents(seq)?.c.eval(z);
    let lhs = c.adjoint() * block_diag2(jm, &(-jm)) * &c;
    Ok(rel_diff(&lhs, &block_diag2(&identity(m), &(-identity(m)))))
}

/// Largest relative difference between the first `n+1` Taylor coefficients of `f_S` and `A`.
pub fn interpolation_residual(seq: &PotapovSeq, s: &SchurParam) -> Result<f64> {
    let f = lft_solution(seq, s)?;
    let t = taylor_coeffs(&f, seq.order())?;
    Ok(t.iter()
        .zip(seq.coeffs())
        .map(|(x, a)| rel_diff(x, a))
        .fold(0.0, f64::max))
}

/// Largest relative difference between Taylor coefficients `n+1..n+k` of the
/// central function and the centers of the successive balls.
pub fn central_extension_residual(seq: &PotapovSeq, k: usize) -> Result<f64> {
    let (central, _) = crate::solve::central_function(seq)?;
    let n = seq.order();
    let t = taylor_coeffs(&central, n + k)?;
    let ext = seq.extend_central(k)?;
    Ok((n + 1..=n + k)
        .map(|i| rel_diff(&t[i], ext.coeff(i)))
        .fold(0.0, f64::max))
}

/// Outcome of one named invariant over all instances.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub instances: usize,
    pub failures: usize,
    /// Largest residual seen.
    pub worst: f64,
    pub limit: f64,
    pub first_failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub seed: u64,
    pub count: usize,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }
}

struct Tally {
    out: CheckOutcome,
}

impl Tally {
    fn new(name: &'static str, limit: f64) -> Self {
        Tally {
            out: CheckOutcome {
                name,
                instances: 0,
                failures: 0,
                worst: 0.0,
                limit,
                first_failure: None,
            },
        }
    }

    /// Records a residual; errors count as failures.
    fn record(&mut self, label: &str, r: Result<f64>) {
        self.out.instances += 1;
        match r {
            Ok(v) if v <= self.out.limit => self.out.worst = self.out.worst.max(v),
            Ok(v) => {
                self.out.worst = if v.is_nan() {
                    f64::NAN
                } else {
                    self.out.worst.max(v)
                };
                self.fail(format!("{label}: residual {v:e}"));
            }
            Err(e) => self.fail(format!("{label}: {e}")),
        }
    }

    fn fail(&mut self, msg: String) {
        self.out.failures += 1;
        self.out.first_failure.get_or_insert(msg);
    }
}

fn bool_residual(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Shape of the `i`-th random instance: `m ∈ 1..=3`, `n ∈ 0..=5`.
fn instance(seed: u64, i: usize) -> (ChaCha8Rng, usize, usize, SignatureMatrix, PotapovSeq) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(i as u64));
    let m = 1 + i % 3;
    let n = (i / 3) % 6;
    let j = random_signature(&mut rng, m);
    let s = rng.random::<u64>();
    let seq = random_strict_seq(m, &j, n, s, 0.8).expect("strict generator");
    (rng, m, n, j, seq)
}

/// Runs every invariant on `count` seeded instances.
pub fn run_suite(seed: u64, count: usize) -> SuiteReport {
    let tol = Tolerances::default();
    let mut pinv_t = Tally::new("matkernel.pinv", 1e-10);
    let mut sqrt_t = Tally::new("matkernel.psd_sqrt", 1e-10);
    let mut class_t = Tally::new("sequence.classification", 0.0);
    let mut pg_t = Tally::new("sequence.pg_roundtrip", 1e-9);
    let mut schur_t = Tally::new("sequence.schur_parameters", 1e-9);
    let mut cons_t = Tally::new("polynomials.constructions", 1e-8);
    let mut ident_t = Tally::new("polynomials.identities", 1e-9);
    let mut bound_t = Tally::new("polynomials.boundary_identity", 1e-9);
    let mut link_t = Tally::new("polynomials.pg_link", 1e-9);
    let mut bp_t = Tally::new("polynomials.bp_factors", 1e-10);
    let mut interp_t = Tally::new("solve.interpolation", 1e-9);
    let mut degen_t = Tally::new("solve.degenerate_interpolation", 1e-8);
    let mut ext_t = Tally::new("solve.central_extension", 1e-9);
    let mut chi_t = Tally::new("weyl.chi_forms", 1e-9);
    let mut memb_t = Tally::new("weyl.membership", 1.0 + 1e-8);
    let mut center_t = Tally::new("weyl.center_forms", 1e-8);
    let mut mono_t = Tally::new("weyl.monotonicity", 1e-10);
    let mut detlr_t = Tally::new("weyl.det_balance", 1e-8);
    let mut transfer_t = Tally::new("weyl.pg_transfer", 1e-8);
    let mut io_t = Tally::new("io.round_trip", 0.0);

    for i in 0..count {
        let (mut rng, m, n, j, seq) = instance(seed, i);
        let label = format!("instance {i} (m={m}, n={n})");

        let g = gaussian_matrix(&mut rng, m + 1, m);
        let low = &g * gaussian_matrix(&mut rng, m, m + 2);
        let p = pinv(&low, &tol);
        let penrose = rel_diff(&(&low * &p * &low), &low)
            .max(rel_diff(&(&p * &low * &p), &p))
            .max(rel_diff(&(&low * &p).adjoint(), &(&low * &p)))
            .max(rel_diff(&(&p * &low).adjoint(), &(&p * &low)));
        pinv_t.record(&label, Ok(penrose));
        let h = &g.adjoint() * &g;
        sqrt_t.record(&label, psd_sqrt(&h, &tol).map(|r| rel_diff(&(&r * &r), &h)));

        class_t.record(
            &label,
            Ok(bool_residual(
                seq.classification() == Classification::Strict,
            )),
        );
        let degen = random_degenerate_seq(m, &j, n, rng.random());
        class_t.record(
            &label,
            degen
                .as_ref()
                .map_err(Clone::clone)
                .map(|d| bool_residual(d.classification() == Classification::Degenerate)),
        );

        pg_t.record(
            &label,
            seq.pg_transform()
                .and_then(|b| PotapovSeq::pg_inverse(&b, &j))
                .map(|back| {
                    back.coeffs()
                        .iter()
                        .zip(seq.coeffs())
                        .map(|(x, a)| rel_diff(x, a))
                        .fold(0.0, f64::max)
                }),
        );

        schur_t.record(
            &label,
            (|| {
                let mut worst: f64 = 0.0;
                for k in 1..=n {
                    let kk = seq.schur_parameter(k)?;
                    if crate::matkernel::spectral_norm(&kk) >= 1.0 {
                        return Ok(f64::INFINITY);
                    }
                    let a = seq.ball_parameters_at(k)?.point(&kk);
                    worst = worst.max(rel_diff(&a, seq.coeff(k)));
                }
                Ok(worst)
            })(),
        );

        let w = random_point(&mut rng, 0.9 * r0(&seq).unwrap_or(0.0));
        cons_t.record(
            &label,
            (|| {
                let g = four_polys_general(&seq)?;
                let s = four_polys_strict(&seq)?;
                let r = four_polys_recursive(&seq)?;
                let dist = [
                    (&g.pi, &s.pi),
                    (&g.rho, &s.rho),
                    (&g.sigma, &s.sigma),
                    (&g.tau, &s.tau),
                ]
                .iter()
                .map(|(a, b)| {
                    a.distance(b) / 1f64.max(a.coeffs().iter().map(max_abs).fold(0.0, f64::max))
                })
                .fold(0.0, f64::max);
                let (cs, _) = central_from_polys(&s);
                let (cr, _) = central_from_polys(&r);
                Ok(dist.max(rel_diff(&cs.eval(w)?, &cr.eval(w)?)))
            })(),
        );

        ident_t.record(
            &label,
            polynomial_identities(&seq, w).map(|v| v.iter().map(|x| x.1).fold(0.0, f64::max)),
        );
        let z = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        bound_t.record(&label, boundary_identity(&seq, z));

        link_t.record(
            &label,
            (|| {
                let l = pg_link(&seq)?;
                let c = resolvents(&seq)?.c.eval(w);
                let lhs = &l.a * l.schur_resolvent.eval(w);
                let rhs = c * block_diag2(&(-&l.u1), &l.u2);
                let im = identity(m);
                Ok(rel_diff(&lhs, &rhs)
                    .max(rel_diff(&(l.u1.adjoint() * &l.u1), &im))
                    .max(rel_diff(&(l.u2.adjoint() * &l.u2), &im)))
            })(),
        );

        bp_t.record(&label, bp_residual(&mut rng, m, &tol));

        let s = random_param(&mut rng, m, 1.0);
        interp_t.record(&label, interpolation_residual(&seq, &s));
        if let Ok(d) = &degen {
            degen_t.record(
                &label,
                interpolation_residual(d, &random_param(&mut rng, m, 1.0)),
            );
        }
        ext_t.record(&label, central_extension_residual(&seq, 3));

        chi_t.record(
            &label,
            chi(&seq, w).and_then(|a| Ok(rel_diff(&a, &chi_alt(&seq, w)?))),
        );

        let ball = weyl_ball(&seq, w);
        memb_t.record(
            &label,
            ball.clone().and_then(|b| {
                let f = lft_solution(&seq, &s)?.eval(w)?;
                if w.norm() == 0.0 {
                    // Membership is exact at the origin; report it on the unit scale.
                    return ball_membership(
                        &b,
                        &f,
                        &Tolerances {
                            residual: 1e-8,
                            ..tol
                        },
                    );
                }
                ball_membership(&b, &f, &tol)
            }),
        );
        center_t.record(
            &label,
            ball.clone().map(|b| rel_diff(&b.center, &b.center_alt)),
        );
        detlr_t.record(
            &label,
            ball.clone().map(|b| {
                let (dl, dr) = (det(&b.l), det(&b.r));
                (dl - dr).norm() / dl.norm().max(dr.norm()).max(f64::MIN_POSITIVE)
            }),
        );
        mono_t.record(
            &label,
            (|| {
                let b0 = ball.clone()?;
                let knorm = 0.8 * rng.random::<f64>();
                let kk = random_with_norm(&mut rng, m, knorm);
                let next = seq.extend_with_parameter(&kk)?;
                let b1 = weyl_ball(&next, w)?;
                let gap = crate::matkernel::hermitian_part(&(&b0.l - &b1.l));
                let scale = 1f64.max(max_abs(&b0.l));
                Ok((-min_eigenvalue(&gap) / scale).max(0.0))
            })(),
        );
        transfer_t.record(
            &label,
            (|| {
                let direct = ball.clone()?;
                let schur = weyl_ball(&seq.pg_transform()?, w)?;
                let t = pg_ball_transfer(&schur, &j)?;
                Ok(rel_diff(&t.l, &direct.l)
                    .max(rel_diff(&t.r, &direct.r))
                    .max(rel_diff(&t.center, &direct.center))
                    .max(rel_diff(&t.center_alt, &direct.center)))
            })(),
        );

        io_t.record(
            &label,
            (|| {
                let text = io::seq_to_json(&seq).to_string();
                let v: Value =
                    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
                let back = io::seq_from_json(&v, tol)?;
                let same = back.coeffs().iter().zip(seq.coeffs()).all(|(x, a)| {
                    x.iter().zip(a.iter()).all(|(p, q)| {
                        p.re.to_bits() == q.re.to_bits() && p.im.to_bits() == q.im.to_bits()
                    })
                });
                Ok(bool_residual(same && back.signature() == seq.signature()))
            })(),
        );

        let _ = in_common_holomorphy(&seq, w);
    }

    SuiteReport {
        seed,
        count,
        checks: [
            pinv_t, sqrt_t, class_t, pg_t, schur_t, cons_t, ident_t, bound_t, link_t, bp_t,
            interp_t, degen_t, ext_t, chi_t, memb_t, center_t, mono_t, detlr_t, transfer_t, io_t,
        ]
        .into_iter()
        .map(|t| t.out)
        .collect(),
    }
}

/// Largest defect-identity residual over the three factor kinds for random data.
///
/// For `m = 1` only the first kind (with `J = 1`) and the second kind (with
/// `J = -1`) exist. For `m ≥ 2` the signature `diag(1, -1, ...)` admits all three.
pub fn bp_residual(rng: &mut impl Rng, m: usize, tol: &Tolerances) -> Result<f64> {
    let alpha = random_point(rng, 0.8);
    let u = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    let mut cases = Vec::new();
    if m == 1 {
        let one = identity(1);
        cases.push((
            SignatureMatrix::identity(1),
            BpKind::First {
                alpha,
                p: one.clone(),
            },
        ));
        cases.push((
            SignatureMatrix::from_diag(&[-1.0])?,
            BpKind::Second { alpha, q: one },
        ));
    } else {
        let mut signs = vec![1.0, -1.0];
        signs.extend((2..m).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }));
        let j = SignatureMatrix::from_diag(&signs)?;
        let jm = j.matrix().clone();
        let vec2 = |a: Complex64, b: Complex64| {
            let mut v = CMatrix::zeros(m, 1);
            v[(0, 0)] = a;
            v[(1, 0)] = b;
            v
        };
        let phase = |rng: &mut dyn rand::RngCore| {
            Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
        };
        let a = phase(rng);
        let shrink = rng.random_range(0.0..0.9);
        let b = phase(rng) * shrink;
        let proj = |v: &CMatrix| {
            let s = (v.adjoint() * &jm * v)[(0, 0)];
            v * v.adjoint() * &jm / s
        };
        let pos = vec2(a, b);
        let neg = vec2(b, a);
        let neutral = vec2(a, phase(rng));
        cases.push((
            j.clone(),
            BpKind::First {
                alpha,
                p: proj(&pos),
            },
        ));
        cases.push((
            j.clone(),
            BpKind::Second {
                alpha,
                q: proj(&neg),
            },
        ));
        cases.push((
            j.clone(),
            BpKind::Third {
                u,
                r: &neutral * neutral.adjoint() * &jm,
            },
        ));
    }
    let mut worst: f64 = 0.0;
    for (j, kind) in cases {
        let f = bp_factor(&kind, &j, tol)?;
        for _ in 0..10 {
            let mut w = random_point(rng, 0.95);
            if let BpKind::Second { alpha, .. } = kind {
                while (w - alpha).norm() < 0.05 {
                    w = random_point(rng, 0.95);
                }
            }
            let b = f.eval(w)?;
            let lhs = j.matrix() - b.adjoint() * j.matrix() * &b;
            worst = worst.max(rel_diff(&lhs, &kind.defect(&j, w)));
        }
    }
    Ok(worst)
}
