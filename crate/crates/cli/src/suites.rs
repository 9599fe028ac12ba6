//! Property suites behind `verify`.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sphere_rigidity::antiderivative::tail;
use sphere_rigidity::confgroup::{self, MoebiusElement, SampledField, SphereGrid};
use sphere_rigidity::exact::PiMultiple;
use sphere_rigidity::greens::{self, GreenKind, RadialGreen, RegularPartConfig};
use sphere_rigidity::ktypes::{branches, dominant_weights_bounded, enumerate_bundle_ktypes, DominantWeight};
use sphere_rigidity::qcurv::{
    lin_obstruction_symbol, obstruction_direct, q_hessian_symbol, q_hessian_target, sample_transverse_traceless,
};
use sphere_rigidity::quadrature::adaptive_tail;
use sphere_rigidity::spectrum::{kappa, kappa_step, spectrum_generate_normalized, t0_eigenvalue, KType, Step};
use sphere_rigidity::symbols::{
    bracket_d2, bracket_definiteness, bracket_l, expected_maximized_sign, extremal_classification, gamma_prefactor,
    prefactor_richardson, BracketDefiniteness, Functional, PrefactorMode,
};
use sphere_rigidity::{ExactScalar, Scalar};

use crate::commands::{CmdResult, Tolerances, UsageError};
use crate::report::{Check, ReportEnvelope, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Spectrum,
    Ktypes,
    Symbols,
    Qcurv,
    Greens,
    Confgroup,
    All,
}

type Q = ExactScalar;

pub struct VerifyOptions {
    pub dims: Vec<usize>,
    pub seed: u64,
    pub order: usize,
    pub tol: Tolerances,
}

pub fn verify(suite: Suite, opts: &VerifyOptions) -> CmdResult {
    let mut r = ReportEnvelope::new("verify");
    r.param("suite", format!("{suite:?}").to_lowercase()).param("seed", opts.seed);
    let run: Vec<Suite> = if suite == Suite::All {
        vec![Suite::Spectrum, Suite::Ktypes, Suite::Symbols, Suite::Qcurv, Suite::Greens, Suite::Confgroup]
    } else {
        vec![suite]
    };
    for s in run {
        let checks = match s {
            Suite::Spectrum => spectrum_suite(),
            Suite::Ktypes => ktypes_suite(),
            Suite::Symbols => symbols_suite(),
            Suite::Qcurv => qcurv_suite(opts.seed),
            Suite::Greens => greens_suite(&opts.tol, &mut r.notes),
            Suite::Confgroup => {
                r.param("dims", format!("{:?}", opts.dims)).param("order", opts.order);
                confgroup_suite(opts)?
            }
            Suite::All => unreachable!(),
        };
        r.checks.extend(checks);
    }
    let mut t = Table::new(&["check", "status"]);
    for c in &r.checks {
        t.push(vec![c.name.clone().into(), (if c.status == crate::report::Status::Pass { "PASS" } else { "FAIL" }).into()]);
    }
    r.results = t;
    Ok(r)
}

fn spectrum_suite() -> Vec<Check> {
    let mut mism = 0;
    let mut kernel = 0;
    for n in 4..=12u32 {
        let table = spectrum_generate_normalized::<Q>(n, 100).expect("n ≥ 4");
        for (t, v) in &table.entries {
            mism += usize::from(*v != t0_eigenvalue::<Q>(t));
            let zero = v.sign() == 0;
            kernel += usize::from(zero != (t.q < 2));
        }
    }
    let mut kap = 0;
    for n in 3..=12u32 {
        for j in 0..=50 {
            for q in KType::q_range(n) {
                let t = KType::new(n, j, q).expect("in range");
                let w = t.weight();
                let cas: i64 = w.entries.iter().enumerate().map(|(i, b)| b * (b + n as i64 - 1 - 2 * i as i64)).sum();
                kap += usize::from(kappa::<Q>(&t) != Q::from_int(cas));
                kap += usize::from(kappa_step::<Q>(&t, Step::JUp).ok() != Some(Q::from_int(n as i64 + 2 * j + 4)));
            }
        }
    }
    vec![
        Check::exact("spectrum recursion equals closed form, n 4..12, j ≤ 100", mism),
        Check::exact("zeros exactly at q in {0,1}", kernel),
        Check::exact("kappa equals the Casimir oracle", kap),
    ]
}

fn ktypes_suite() -> Vec<Check> {
    let mut bad = 0;
    for n in 4..=8u32 {
        for d in [1i64, 2] {
            let sigma = DominantWeight::symmetric_power(d, n as usize).expect("dominant");
            let mut brute: Vec<_> = dominant_weights_bounded(n as usize + 1, 12)
                .into_iter()
                .filter(|b| branches(b, &sigma).unwrap_or(false))
                .collect();
            let mut fam = enumerate_bundle_ktypes(&sigma, n, (12 - d) as u32).expect("n ≥ 4");
            brute.sort();
            fam.sort();
            bad += usize::from(brute != fam);
        }
    }
    vec![Check::exact("bundle K-types match brute-force interlacing", bad)]
}

fn symbols_suite() -> Vec<Check> {
    let mut signs = 0;
    for n in 3..=13 {
        for f in Functional::ALL.into_iter().filter(|f| f.applies_to(n)) {
            let st = extremal_classification(f, n).expect("applicable");
            signs += usize::from(st.maximized_sign != expected_maximized_sign(f, n));
        }
    }
    let zero = Q::from_int(0);
    let mut defs = 0;
    for n in 3..=13 {
        defs += usize::from(bracket_definiteness(&bracket_l(n, &zero), n - 1) != BracketDefiniteness::PosSemidef);
        defs += usize::from(bracket_definiteness(&bracket_d2(n, &zero), n - 1) != BracketDefiniteness::NegSemidef);
    }
    let det = gamma_prefactor(3, PrefactorMode::DetDerivativeAtZero).expect("odd");
    let zeta = gamma_prefactor(4, PrefactorMode::Zeta0LimitAtZero).expect("even");
    let exact = usize::from(det.exact != PiMultiple::rational(Q::new(1.into(), 256.into())))
        + usize::from(zeta.exact != PiMultiple::new(Q::new(1.into(), 960.into()), -2));
    let rich = prefactor_richardson(4, PrefactorMode::Zeta0LimitAtZero);
    vec![
        Check::exact("extremality signs, n 3..13", signs),
        Check::exact("bracket classes at s = 0", defs),
        Check::exact("prefactors 1/256 and 1/(960 π²)", exact),
        Check::toleranced("Richardson limit of the zeta prefactor", ((rich - zeta.value) / zeta.value).abs(), 1e-6),
    ]
}

fn qcurv_suite(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut q, mut o) = (0, 0);
    for n in [4usize, 6, 8] {
        for _ in 0..100 {
            let (xi, k) = sample_transverse_traceless(n, 5, &mut rng);
            q += usize::from(q_hessian_symbol(&xi, &k).ok() != Some(q_hessian_target(&xi, &k)));
            o += usize::from(lin_obstruction_symbol(&xi, &k).ok() != obstruction_direct(&xi, &k).ok());
        }
    }
    vec![
        Check::exact("σₙ(H) = −|ξ|ⁿ/4 · k, n ∈ {4,6,8}", q),
        Check::exact("obstruction symbol = −|ξ|ⁿ k/(2(n−2))", o),
    ]
}

fn greens_suite(tol: &Tolerances, notes: &mut Vec<String>) -> Vec<Check> {
    let (mut ode, mut quad): (f64, f64) = (0.0, 0.0);
    for n in [3u32, 5, 7] {
        let gl = RadialGreen::new(n, GreenKind::L).expect("odd");
        let gl2 = RadialGreen::new(n, GreenKind::L2).expect("odd");
        for i in 0..=27 {
            let r = 0.3 + 0.1 * i as f64;
            let s = gl.evaluate(r).unwrap_or(f64::NAN);
            ode = ode.max(greens::radial_l_apply(n, &gl, r).map_or(f64::NAN, |v| v.abs() / s));
            ode = ode.max(greens::radial_l_apply(n, &gl2, r).map_or(f64::NAN, |v| (v - s).abs() / s));
            let x = (r / 2.0).tan();
            let e = 1 - n as i32;
            let d = adaptive_tail(|t: f64| t.powi(e) / (1.0 + t * t), x, 1e-15, 1e-14).unwrap_or(f64::NAN);
            quad = quad.max((tail(n - 1, 1, x) - d).abs() / d);
            let d = adaptive_tail(|t: f64| t.powi(e + 2) / (1.0 + t * t).powi(2), x, 1e-15, 1e-14).unwrap_or(f64::NAN);
            quad = quad.max((tail(n - 3, 2, x) - d).abs() / d);
        }
    }
    let pi2 = |a: i64, b: i64| PiMultiple::new(Q::new(a.into(), b.into()), 2);
    let closed = usize::from(greens::kv_trace_l2(1) != pi2(3, 128))
        + usize::from(greens::kv_trace_l2(2) != pi2(-5, 2048))
        + usize::from(greens::kv_trace_d2(1) != pi2(-1, 4))
        + usize::from(greens::kv_trace_d2(2) != pi2(3, 16));
    let mut checks = vec![
        Check::toleranced("radial ODE residuals, n ∈ {3,5,7}", ode, tol.ode),
        Check::toleranced("τ-integrals: antiderivative vs quadrature", quad, tol.quad),
        Check::exact("trace closed forms for k = 1, 2", closed),
    ];
    let cfg = RegularPartConfig::default();
    for kind in [GreenKind::L2, GreenKind::D2] {
        let ratios: Vec<f64> = [1, 2].iter().map(|&k| greens::compare_trace(kind, k, &cfg).map_or(f64::NAN, |c| c.ratio)).collect();
        notes.push(format!("{kind}: numeric/closed-form ratio k=1 {:.9}, k=2 {:.9}", ratios[0], ratios[1]));
        checks.push(Check::toleranced(
            format!("{kind} regular-part ratio constant across k = 1, 2"),
            (ratios[0] / ratios[1] - 1.0).abs(),
            1e-3,
        ));
    }
    checks
}

fn confgroup_suite(opts: &VerifyOptions) -> Result<Vec<Check>, UsageError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut checks = Vec::new();
    for &n in &opts.dims {
        if !(n == 2 || n == 3) {
            return Err(UsageError(format!("confgroup suite runs for --dim 2 or 3, got {n}")));
        }
        let point = |rng: &mut ChaCha8Rng| DVector::from_fn(n + 1, |_, _| rng.gen_range(-1.0..1.0)).normalize();
        let (mut conf, mut coc, mut lor): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for _ in 0..5 {
            let a = confgroup::random_moebius(n, 1.0, 1.0, &mut rng);
            let b = confgroup::random_moebius(n, 1.0, 1.0, &mut rng);
            lor = lor.max(a.lorentz_defect());
            for _ in 0..100 {
                let y = point(&mut rng);
                conf = conf.max(confgroup::conformality_defect(&a, &y, 1e-5)?);
                let lhs = confgroup::conformal_factor(&a.compose(&b), &y)?;
                let rhs = confgroup::conformal_factor(&a, &confgroup::act(&b, &y)?)? * confgroup::conformal_factor(&b, &y)?;
                coc = coc.max((lhs - rhs).abs() / lhs);
            }
        }
        let grid = SphereGrid::new(n, opts.order)?;
        let h = confgroup::random_band_limited_field(n, &mut rng);
        let k = confgroup::random_band_limited_field(n, &mut rng);
        let base = confgroup::pairing(&SampledField::sample(&grid, &h), &SampledField::sample(&grid, &k), &grid);
        let mut pair: f64 = 0.0;
        for a in [MoebiusElement::boost(n, 0, 1.0), MoebiusElement::boost(n, n, -0.5), confgroup::random_moebius(n, 1.0, 1.0, &mut rng)] {
            pair = pair.max(confgroup::check_pairing_invariance(&h, &k, &a, &grid)? / (1.0 + base.abs()));
        }
        let points: Vec<DVector<f64>> = (0..50).map(|_| DVector::from_fn(n, |_, _| rng.gen_range(-0.7..0.7))).collect();
        let field = |x: &DVector<f64>| DVector::from_fn(x.len(), |i, _| x[i] * x[i] - 0.5 * x[(i + 1) % x.len()] + 0.2);
        let mut cov: f64 = 0.0;
        for _ in 0..3 {
            let a = confgroup::random_moebius(n, 0.3, 1.0, &mut rng);
            cov = cov.max(confgroup::check_ahlfors_covariance(&field, &a, &points, 1e-5)?);
        }
        let mut ker: f64 = 0.0;
        for f in confgroup::conformal_killing_fields(n) {
            for x in &points {
                ker = ker.max(confgroup::ahlfors_chart(f.as_ref(), x, 1e-5).amax());
            }
        }
        checks.push(Check::toleranced(format!("n={n} Lorentz form preserved"), lor, 1e-12));
        checks.push(Check::toleranced(format!("n={n} differential is conformal"), conf, 1e-7));
        checks.push(Check::toleranced(format!("n={n} Ω cocycle"), coc, 1e-7));
        checks.push(Check::toleranced(format!("n={n} pairing invariance"), pair, opts.tol.conf));
        checks.push(Check::toleranced(format!("n={n} Ahlfors covariance"), cov, opts.tol.conf));
        checks.push(Check::toleranced(format!("n={n} conformal Killing fields in ker S"), ker, 1e-8));
    }
    Ok(checks)
}
