use modn_core::identities::DEFAULT_TOLERANCE;
use modn_core::{
    cat_uncertainty_check, default_grid_range, kaleidoscope_state, modn_exp_all, modn_exp_dft,
    modn_gaussian_exp, observable_report, probability_grid, verify_addition_formulas, verify_all,
    verify_exchange_identities, verify_mod2_factorization, verify_q_commutation, Complex64, Error,
    FockDim, IdentityReport, ModulusContext, SeriesConfig,
};
use serde::Serialize;

use crate::output::{csv_row, fixed, to_json, Cplx, Num};
use crate::{
    Command, EvalArgs, Format, GridArgs, StateArgs, Suite, VerifyArgs, EXIT_INVALID_INPUT,
    EXIT_NUMERICAL, EXIT_OK, EXIT_UNCERTIFIED, EXIT_VERIFY_FAILED,
};

/// What one command produced: a payload (possibly alongside a failure code)
/// and a diagnostic for standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct Emitted {
    pub code: i32,
    pub body: Option<String>,
    pub message: Option<String>,
}

impl Emitted {
    fn ok(body: String) -> Self {
        Self {
            code: EXIT_OK,
            body: Some(body),
            message: None,
        }
    }

    fn fail(code: i32, message: String) -> Self {
        Self {
            code,
            body: None,
            message: Some(message),
        }
    }
}

impl From<Error> for Emitted {
    fn from(e: Error) -> Self {
        let code = if e.is_invalid_input() {
            EXIT_INVALID_INPUT
        } else {
            EXIT_NUMERICAL
        };
        Self::fail(code, e.to_string())
    }
}

/// Sweep used by `verify` when no parameters are given.
pub const VERIFY_SWEEP: [(Complex64, Complex64); 7] = [
    (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
    (Complex64::new(0.7, 0.0), Complex64::new(0.4, 0.0)),
    (Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)),
    (Complex64::new(0.0, 0.3), Complex64::new(0.0, 0.3)),
    (Complex64::new(0.6, 0.0), Complex64::new(0.6, 0.0)),
    (Complex64::new(1.0, 0.2), Complex64::new(0.5, 0.0)),
    (Complex64::new(0.8, 0.0), Complex64::new(0.3, 0.0)),
];

pub fn execute_command(command: &Command, max_dim: usize) -> Emitted {
    let result = match command {
        Command::Eval(args) => eval(args),
        Command::State(args) => state(args, max_dim),
        Command::Observables(args) => observables(args, max_dim),
        Command::Grid(args) => grid(args, max_dim),
        Command::Verify(args) => verify(args, max_dim),
    };
    result.unwrap_or_else(|e| e)
}

type CmdResult = Result<Emitted, Emitted>;

fn context(n: usize, k: usize) -> Result<ModulusContext, Emitted> {
    let ctx = ModulusContext::new(n)?;
    ctx.check_index(k)?;
    Ok(ctx)
}

fn finite(name: &str, values: &[f64]) -> Result<(), Emitted> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Emitted::fail(
            EXIT_INVALID_INPUT,
            format!("{name} must be finite"),
        ))
    }
}

fn chosen_dim(
    requested: Option<usize>,
    alpha: Complex64,
    max_dim: usize,
) -> Result<FockDim, Emitted> {
    match requested {
        Some(d) if d > max_dim => Err(Emitted::fail(
            EXIT_INVALID_INPUT,
            format!(
                "--dim {d} exceeds the cap {max_dim} (set {} to raise it)",
                crate::MAX_DIM_ENV
            ),
        )),
        Some(d) => Ok(FockDim::new(d)?),
        None => Ok(FockDim::auto_capped(alpha, max_dim)),
    }
}

#[derive(Serialize)]
struct EvalReport {
    n: usize,
    k: usize,
    z: Cplx,
    series: Cplx,
    dft: Cplx,
    diff: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    x: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gaussian: Option<Cplx>,
}

fn eval(args: &EvalArgs) -> CmdResult {
    let (n, k) = (args.modulus.n, args.modulus.k);
    let ctx = context(n, k)?;
    let z = args.z();
    finite("--z-re/--z-im", &[z.re, z.im])?;
    let series = modn_exp_all(&ctx, z, &SeriesConfig::default())?[k];
    let dft = modn_exp_dft(&ctx, k, z)?;
    let gaussian = match args.x {
        Some(x) => {
            finite("--x", &[x])?;
            Some(modn_gaussian_exp(&ctx, k, z, x)?)
        }
        None => None,
    };
    let diff = (series - dft).norm();

    let body = match args.out.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&EvalReport {
            n,
            k,
            z: z.into(),
            series: series.into(),
            dft: dft.into(),
            diff: Num(diff),
            x: args.x.map(Num),
            gaussian: gaussian.map(Cplx::from),
        }),
        Format::Csv => {
            let mut header = vec![
                "n",
                "k",
                "z_re",
                "z_im",
                "series_re",
                "series_im",
                "dft_re",
                "dft_im",
                "diff",
            ];
            let mut row = vec![
                n.to_string(),
                k.to_string(),
                fixed(z.re),
                fixed(z.im),
                fixed(series.re),
                fixed(series.im),
                fixed(dft.re),
                fixed(dft.im),
                fixed(diff),
            ];
            if let (Some(x), Some(g)) = (args.x, gaussian) {
                header.extend(["x", "gaussian_re", "gaussian_im"]);
                row.extend([fixed(x), fixed(g.re), fixed(g.im)]);
            }
            csv_row(header) + &csv_row(row)
        }
    };
    Ok(Emitted::ok(body))
}

#[derive(Serialize)]
struct StateReport {
    n: usize,
    k: usize,
    alpha: Cplx,
    dim: usize,
    amps: Vec<Cplx>,
    mean_photons: Num,
    delta_q: Num,
    delta_p: Num,
    product: Num,
}

fn state(args: &StateArgs, max_dim: usize) -> CmdResult {
    let (n, k) = (args.modulus.n, args.modulus.k);
    let ctx = context(n, k)?;
    let alpha = args.alpha.alpha();
    finite("--alpha-re/--alpha-im", &[alpha.re, alpha.im])?;
    let dim = chosen_dim(args.dim, alpha, max_dim)?;
    let vector = kaleidoscope_state(&ctx, k, alpha, dim)?;
    let report = observable_report(&ctx, k, alpha, Some(dim))?;

    let body = match args.out.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&StateReport {
            n,
            k,
            alpha: alpha.into(),
            dim: dim.get(),
            amps: vector.amps().iter().copied().map(Cplx::from).collect(),
            mean_photons: Num(report.mean_photons_formula),
            delta_q: Num(report.delta_q),
            delta_p: Num(report.delta_p),
            product: Num(report.product),
        }),
        Format::Csv => {
            let mut text = format!(
                "# n={n},k={k},alpha_re={},alpha_im={},dim={},mean_photons={},delta_q={},delta_p={},product={}\n",
                fixed(alpha.re),
                fixed(alpha.im),
                dim.get(),
                fixed(report.mean_photons_formula),
                fixed(report.delta_q),
                fixed(report.delta_p),
                fixed(report.product),
            );
            text += &csv_row(["m", "amp_re", "amp_im"]);
            for (m, amp) in vector.amps().iter().enumerate() {
                text += &csv_row([m.to_string(), fixed(amp.re), fixed(amp.im)]);
            }
            text
        }
    };
    Ok(Emitted::ok(body))
}

#[derive(Serialize)]
struct CatReport {
    /// Fock-basis `4P² − (1+2N)² + (α²+ᾱ²)²`, zero for cat states.
    relation_residual: Num,
    paper_expression_value: Option<Num>,
}

#[derive(Serialize)]
struct ObservablesReport {
    n: usize,
    k: usize,
    alpha: Cplx,
    dim: usize,
    mean_photons_formula: Num,
    mean_photons_fock: Num,
    delta_q: Num,
    delta_p: Num,
    product: Num,
    product_formula: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cat: Option<CatReport>,
}

fn observables(args: &StateArgs, max_dim: usize) -> CmdResult {
    let (n, k) = (args.modulus.n, args.modulus.k);
    let ctx = context(n, k)?;
    let alpha = args.alpha.alpha();
    finite("--alpha-re/--alpha-im", &[alpha.re, alpha.im])?;
    let dim = chosen_dim(args.dim, alpha, max_dim)?;
    let r = observable_report(&ctx, k, alpha, Some(dim))?;
    let cat = if n == 2 {
        let check = cat_uncertainty_check(alpha, k)?;
        let squares = 2.0 * (alpha * alpha).re;
        let lhs = 4.0 * r.product * r.product;
        let rhs = (1.0 + 2.0 * r.mean_photons_fock).powi(2) - squares * squares;
        Some(CatReport {
            relation_residual: Num(lhs - rhs),
            paper_expression_value: check.paper_expression_value.map(Num),
        })
    } else {
        None
    };

    let body = match args.out.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&ObservablesReport {
            n,
            k,
            alpha: alpha.into(),
            dim: dim.get(),
            mean_photons_formula: Num(r.mean_photons_formula),
            mean_photons_fock: Num(r.mean_photons_fock),
            delta_q: Num(r.delta_q),
            delta_p: Num(r.delta_p),
            product: Num(r.product),
            product_formula: r.product_formula.map(Num),
            cat,
        }),
        Format::Csv => {
            let opt = |v: Option<f64>| v.map(fixed).unwrap_or_default();
            csv_row([
                "n",
                "k",
                "alpha_re",
                "alpha_im",
                "dim",
                "mean_photons_formula",
                "mean_photons_fock",
                "delta_q",
                "delta_p",
                "product",
                "product_formula",
            ]) + &csv_row([
                n.to_string(),
                k.to_string(),
                fixed(alpha.re),
                fixed(alpha.im),
                dim.get().to_string(),
                fixed(r.mean_photons_formula),
                fixed(r.mean_photons_fock),
                fixed(r.delta_q),
                fixed(r.delta_p),
                fixed(r.product),
                opt(r.product_formula),
            ])
        }
    };
    Ok(Emitted::ok(body))
}

#[derive(Serialize)]
struct GridMetaOut {
    n: usize,
    k: usize,
    alpha: Cplx,
    dim: usize,
    integral: Num,
    certified: bool,
    x_min: Num,
    x_max: Num,
    samples: usize,
}

#[derive(Serialize)]
struct GridSample {
    x: Num,
    psi_re: Num,
    psi_im: Num,
    prob: Num,
}

#[derive(Serialize)]
struct GridOut {
    meta: GridMetaOut,
    samples: Vec<GridSample>,
}

fn grid(args: &GridArgs, max_dim: usize) -> CmdResult {
    let (n, k) = (args.modulus.n, args.modulus.k);
    let ctx = context(n, k)?;
    let alpha = args.alpha.alpha();
    finite("--alpha-re/--alpha-im", &[alpha.re, alpha.im])?;
    let (lo, hi) = default_grid_range(alpha);
    let x_min = args.x_min.unwrap_or(lo);
    let x_max = args.x_max.unwrap_or(hi);
    let g = probability_grid(&ctx, k, alpha, x_min, x_max, args.samples)?;
    let dim = FockDim::auto_capped(alpha, max_dim).get();

    let body = match args.out.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&GridOut {
            meta: GridMetaOut {
                n,
                k,
                alpha: alpha.into(),
                dim,
                integral: Num(g.meta.integral),
                certified: g.meta.certified,
                x_min: Num(x_min),
                x_max: Num(x_max),
                samples: args.samples,
            },
            samples: g
                .x_samples
                .iter()
                .zip(&g.psi)
                .zip(&g.prob)
                .map(|((x, psi), p)| GridSample {
                    x: Num(*x),
                    psi_re: Num(psi.re),
                    psi_im: Num(psi.im),
                    prob: Num(*p),
                })
                .collect(),
        }),
        Format::Csv => {
            let mut text = format!(
                "# n={n},k={k},alpha_re={},alpha_im={},dim={dim},integral={}\n",
                fixed(alpha.re),
                fixed(alpha.im),
                fixed(g.meta.integral),
            );
            text += &csv_row(["x", "psi_re", "psi_im", "prob"]);
            for ((x, psi), p) in g.x_samples.iter().zip(&g.psi).zip(&g.prob) {
                text += &csv_row([fixed(*x), fixed(psi.re), fixed(psi.im), fixed(*p)]);
            }
            text
        }
    };
    if g.meta.certified {
        return Ok(Emitted::ok(body));
    }
    let suggest = (2.0 * x_min.abs().max(x_max.abs())).max(hi);
    Ok(Emitted {
        code: EXIT_UNCERTIFIED,
        body: Some(body),
        message: Some(format!(
            "grid integral {} is not within 1e-4 of 1; widen the range, e.g. --x-min {} --x-max {}",
            fixed(g.meta.integral),
            -suggest,
            suggest
        )),
    })
}

#[derive(Serialize)]
struct ParamsOut {
    alpha: Cplx,
    beta: Cplx,
}

#[derive(Serialize)]
struct IdentityOut {
    identity_name: String,
    residual_norm: Num,
    tolerance: Num,
    passed: bool,
    dim: usize,
    params: ParamsOut,
}

impl From<&IdentityReport> for IdentityOut {
    fn from(r: &IdentityReport) -> Self {
        Self {
            identity_name: r.identity_name.clone(),
            residual_norm: Num(r.residual_norm),
            tolerance: Num(r.tolerance),
            passed: r.passed,
            dim: r.dim.get(),
            params: ParamsOut {
                alpha: r.params.alpha.into(),
                beta: r.params.beta.into(),
            },
        }
    }
}

fn run_suite(
    suite: Suite,
    alpha: Complex64,
    beta: Complex64,
    dim: FockDim,
) -> modn_core::Result<Vec<IdentityReport>> {
    Ok(match suite {
        Suite::Mod2Identities => {
            let mut v = verify_mod2_factorization(alpha, beta, dim)?.to_vec();
            v.extend(verify_exchange_identities(alpha, beta, dim)?);
            v
        }
        Suite::Addition => verify_addition_formulas(alpha, beta, dim)?.to_vec(),
        Suite::QCommutation => vec![verify_q_commutation(alpha, beta, dim)?],
        Suite::All => verify_all(alpha, beta, dim)?,
    })
}

fn verify(args: &VerifyArgs, max_dim: usize) -> CmdResult {
    if args.dim > max_dim {
        return Err(Emitted::fail(
            EXIT_INVALID_INPUT,
            format!("--dim {} exceeds the cap {max_dim}", args.dim),
        ));
    }
    let tolerance = args.tol.unwrap_or(DEFAULT_TOLERANCE);
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Emitted::fail(
            EXIT_INVALID_INPUT,
            format!("--tol must be positive and finite, got {tolerance}"),
        ));
    }
    let dim = FockDim::new(args.dim)?;
    let points = match args.point() {
        Some(p) => {
            finite("--alpha/--beta", &[p.0.re, p.0.im, p.1.re, p.1.im])?;
            vec![p]
        }
        None => VERIFY_SWEEP.to_vec(),
    };
    let mut reports = Vec::new();
    for (alpha, beta) in points {
        for r in run_suite(args.suite, alpha, beta, dim)? {
            reports.push(r.with_tolerance(tolerance));
        }
    }

    let body = match args.out.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&reports.iter().map(IdentityOut::from).collect::<Vec<_>>()),
        Format::Csv => {
            let mut text = csv_row([
                "identity_name",
                "alpha_re",
                "alpha_im",
                "beta_re",
                "beta_im",
                "dim",
                "residual_norm",
                "tolerance",
                "passed",
            ]);
            for r in &reports {
                text += &csv_row([
                    r.identity_name.clone(),
                    fixed(r.params.alpha.re),
                    fixed(r.params.alpha.im),
                    fixed(r.params.beta.re),
                    fixed(r.params.beta.im),
                    r.dim.get().to_string(),
                    fixed(r.residual_norm),
                    fixed(r.tolerance),
                    r.passed.to_string(),
                ]);
            }
            text
        }
    };
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.identity_name.as_str())
        .collect();
    if failed.is_empty() {
        return Ok(Emitted::ok(body));
    }
    Ok(Emitted {
        code: EXIT_VERIFY_FAILED,
        body: Some(body),
        message: Some(format!(
            "{} identity checks failed: {}",
            failed.len(),
            failed.join(", ")
        )),
    })
}
