use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sphere_rigidity::greens::{self, GreenKind, RadialGreen, RegularPartConfig};
use sphere_rigidity::qcurv::{q_hessian_symbol, q_hessian_target, sample_transverse_traceless};
use sphere_rigidity::spectrum::{spectrum_generate_dim3, spectrum_generate_normalized, t0_eigenvalue, KType, SpectrumTable};
use sphere_rigidity::symbols::{expected_maximized_sign, extremal_classification, Functional};
use sphere_rigidity::{Error, ExactScalar, Scalar};

use crate::report::{Cell, Check, ReportEnvelope, Table};

/// A bad parameter combination; exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

pub type CmdResult = Result<ReportEnvelope, UsageError>;

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub ode: f64,
    pub quad: f64,
    pub conf: f64,
}

fn exact_str(v: &ExactScalar) -> String {
    v.to_string()
}

fn superscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

pub fn spectrum(n: u32, j_max: u32) -> CmdResult {
    let mut r = ReportEnvelope::new("spectrum");
    r.param("dim", n).param("jmax", j_max);
    if n < 2 {
        return Err(UsageError(format!("--dim must be at least 2, got {n}")));
    }
    if n == 2 {
        r.notes.push(
            "n = 2: the space of conformal structures on S^2 is a single point, so the Hessian is universally zero; no table."
                .into(),
        );
        return Ok(r);
    }
    let table: SpectrumTable<ExactScalar> = if n == 3 {
        let plus = t0_eigenvalue(&KType::new(3, 0, 2)?);
        let minus = t0_eigenvalue(&KType::new(3, 0, -2)?);
        spectrum_generate_dim3(j_max, plus, minus)?
    } else {
        spectrum_generate_normalized(n, j_max)?
    };
    let mut t = Table::new(&["n", "j", "q", "branch", "recursion_value", "closed_form_value", "equal"]);
    let mut mismatches = 0;
    for (kt, v) in &table.entries {
        let closed: ExactScalar = t0_eigenvalue(kt);
        let equal = *v == closed;
        mismatches += usize::from(!equal);
        let branch = match (n, kt.q.signum()) {
            (3, 1) => "T0+",
            (3, -1) => "T0-",
            (3, _) => "T0+/T0-",
            _ => "T0",
        };
        t.push(vec![n.into(), kt.j.into(), kt.q.into(), branch.into(), exact_str(v).into(), exact_str(&closed).into(), equal.into()]);
    }
    r.results = t;
    r.notes.push(table.free_scale_note.clone());
    r.checks.push(Check::exact("recursion equals closed form on every K-type", mismatches));
    r.checks.push(Check::exact("relation holds on every edge", usize::from(table.max_edge_defect() != 0.0)));
    if n == 3 {
        let bad = (0..=j_max as i64)
            .filter(|&j| {
                let p = table.get(j, 2).map(Scalar::sign).unwrap_or(0);
                let m = table.get(j, -2).map(Scalar::sign).unwrap_or(0);
                p * m != -1
            })
            .count();
        r.checks.push(Check::exact("q = 2 and q = -2 have opposite signs", bad));
    }
    Ok(r)
}

pub fn signs(n_max: u32) -> CmdResult {
    if n_max < 3 {
        return Err(UsageError(format!("--nmax must be at least 3, got {n_max}")));
    }
    let mut r = ReportEnvelope::new("signs");
    r.param("nmax", n_max);
    let mut t = Table::new(&[
        "n",
        "functional",
        "prefactor_sign",
        "bracket_sign",
        "c_sign",
        "maximized_sign",
        "expected_sign",
        "statement",
        "status",
    ]);
    let mut bad = 0;
    for n in 3..=n_max {
        for f in Functional::ALL {
            if !f.applies_to(n) {
                let na = || Cell::from("-");
                t.push(vec![n.into(), f.to_string().into(), na(), na(), na(), na(), na(), na(), "NOT-APPLICABLE".into()]);
                continue;
            }
            let st = extremal_classification(f, n)?;
            let want = expected_maximized_sign(f, n);
            let ok = st.maximized_sign == want;
            bad += usize::from(!ok);
            t.push(vec![
                n.into(),
                f.to_string().into(),
                st.prefactor_sign.into(),
                st.bracket_sign.into(),
                st.c_sign.into(),
                st.maximized_sign.into(),
                want.into(),
                st.statement.into(),
                (if ok { "PASS" } else { "FAIL" }).into(),
            ]);
        }
    }
    r.results = t;
    r.checks.push(Check::exact("sign chain reproduces the four extremality statements", bad));
    Ok(r)
}

pub fn traces(k_max: u32, numeric: bool) -> CmdResult {
    if k_max < 1 {
        return Err(UsageError("--kmax must be at least 1".into()));
    }
    let mut r = ReportEnvelope::new("traces");
    r.param("kmax", k_max).param("numeric", numeric);
    let mut cols = vec!["operator", "k", "n", "coefficient", "pi_exponent", "exact", "value"];
    if numeric {
        cols.extend(["numeric_pipeline", "numeric_over_closed_form"]);
    }
    let mut t = Table::new(&cols);
    let mut bad = 0;
    let cfg = if k_max <= 2 { RegularPartConfig::default() } else { RegularPartConfig::wide() };
    for (kind, label) in [(GreenKind::L2, "L^2"), (GreenKind::D2, "D^2")] {
        for k in 1..=k_max {
            let v = match kind {
                GreenKind::L2 => greens::kv_trace_l2(k),
                _ => greens::kv_trace_d2(k),
            };
            let want = match kind {
                GreenKind::L2 if k % 2 == 1 => 1,
                GreenKind::L2 => -1,
                _ if k % 2 == 1 => -1,
                _ => 1,
            };
            bad += usize::from(v.sign() != want);
            let mut row: Vec<Cell> = vec![
                label.into(),
                k.into(),
                (2 * k + 1).into(),
                v.coeff.to_string().into(),
                v.pi_exp().unwrap_or(0).into(),
                v.render().into(),
                v.to_f64().into(),
            ];
            if numeric {
                match greens::numeric_trace(kind, k, &cfg) {
                    Ok((x, _)) => row.extend([x.into(), (x / v.to_f64()).into()]),
                    Err(e) => row.extend([Cell::from(e.to_string()), Cell::from("-")]),
                }
            }
            t.push(row);
        }
    }
    r.results = t;
    r.checks.push(Check::exact("signs (-1)^(k+1) for L^2 and (-1)^k for D^2", bad));
    if numeric {
        r.notes.push(
            "numeric_pipeline is vol(S^n) times the extracted regular part of the Green's function; its ratio to the closed form is reported, not checked."
                .into(),
        );
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Profile {
    L,
    L2,
    D2,
}

pub fn greens_cmd(n: u32, profile: Profile, points: usize, tol: &Tolerances) -> CmdResult {
    let kind = match profile {
        Profile::L => GreenKind::L,
        Profile::L2 => GreenKind::L2,
        Profile::D2 => GreenKind::D2,
    };
    let g = RadialGreen::new(n, kind)?;
    if points < 2 {
        return Err(UsageError("--points must be at least 2".into()));
    }
    let mut r = ReportEnvelope::new("greens");
    r.param("dim", n).param("profile", kind).param("points", points);
    let mut t = Table::new(&["r", "value", "ode_residual", "quadrature_residual"]);
    let (mut worst_ode, mut worst_quad): (f64, f64) = (0.0, 0.0);
    for i in 0..points {
        let rad = 0.3 + 2.7 * i as f64 / (points - 1) as f64;
        let v = g.evaluate(rad)?;
        let gl = greens::green_l(n, rad)?;
        let ode = match kind {
            GreenKind::L => Some(greens::radial_l_apply(n, &g, rad)?.abs() / gl.abs()),
            GreenKind::L2 => Some((greens::radial_l_apply(n, &g, rad)? - gl).abs() / gl.abs()),
            GreenKind::D2 => None,
        };
        let quad = match kind {
            GreenKind::L => None,
            GreenKind::L2 => Some((greens::green_l2_quadrature(n, rad, 1e-14)? - v).abs() / v.abs()),
            GreenKind::D2 => Some((greens::green_d2_quadrature(n, (rad / 2.0).tan(), 1e-14)? - v).abs() / v.abs()),
        };
        worst_ode = worst_ode.max(ode.unwrap_or(0.0));
        worst_quad = worst_quad.max(quad.unwrap_or(0.0));
        let opt = |x: Option<f64>| x.map(Cell::from).unwrap_or_else(|| Cell::from("-"));
        t.push(vec![rad.into(), v.into(), opt(ode), opt(quad)]);
    }
    r.results = t;
    match kind {
        GreenKind::L => r.checks.push(Check::toleranced("L G_L = 0 (relative)", worst_ode, tol.ode)),
        GreenKind::L2 => {
            r.checks.push(Check::toleranced("L G_L2 = G_L (relative)", worst_ode, tol.ode));
            r.checks.push(Check::toleranced("antiderivative vs quadrature", worst_quad, tol.quad));
        }
        GreenKind::D2 => r.checks.push(Check::toleranced("closed form vs quadrature", worst_quad, tol.quad)),
    }
    let cfg = if n <= 5 { RegularPartConfig::default() } else { RegularPartConfig::wide() };
    match g.regular_part(&cfg) {
        Ok(reg) => r.notes.push(format!(
            "regular part at coincidence: {:.12e} (fit/extrapolation disagreement {:.1e})",
            reg.value, reg.error_estimate
        )),
        Err(e) => r.notes.push(format!("regular part: {e}")),
    }
    r.notes.push(format!("singular orders: {:?}", g.singular_orders));
    Ok(r)
}

pub fn qsymbol(n: u32, samples: usize, seed: u64) -> CmdResult {
    if n < 4 || n % 2 == 1 {
        return Err(UsageError(format!("qsymbol needs even --dim ≥ 4, got {n}")));
    }
    let mut r = ReportEnvelope::new("qsymbol");
    r.param("dim", n).param("samples", samples).param("seed", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Table::new(&["sample", "xi", "equal"]);
    let mut bad = 0;
    for i in 0..samples {
        let (xi, k) = sample_transverse_traceless(n as usize, 5, &mut rng);
        let ok = q_hessian_symbol(&xi, &k)? == q_hessian_target(&xi, &k);
        bad += usize::from(!ok);
        let xs: Vec<String> = xi.iter().map(BigRational::to_string).collect();
        t.push(vec![(i as i64).into(), format!("({})", xs.join(" ")).into(), ok.into()]);
    }
    r.results = t;
    let sup = superscript(n);
    r.checks.push(Check::exact(format!("σ{}(H) = −|ξ|{sup}/4 · Id", subscript(n)), bad));
    Ok(r)
}

fn subscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}
