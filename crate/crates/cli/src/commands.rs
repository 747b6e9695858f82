//! The four subcommands. Each resolves the merged configuration into
//! library types (structural problems were already caught by
//! `ScenarioConfig::validate`; value rejections surface here as physics
//! errors), computes, and renders CSV or JSON to the configured sink.

use crate::config::{OutputFormat, ScenarioConfig};
use crate::error::CliError;
use crate::output::{fmt_f64, json_envelope, num, Csv, Sink};
use lindblad_sieve::{
    coefficients_to_parameters, compose, entropy, evolve, optimal_shape_from_kernels,
    optimal_shape_numeric, optimal_squeezing_closed_form, sieve_kernels,
    sieve_time_independence_check, stationary_covariance, CovarianceMatrix,
    GeneratorCoefficients, GridSpec, LindbladParams, PhysicalConstants,
};
use num_complex::Complex64;
use serde_json::{json, Value};

fn constants(cfg: &ScenarioConfig) -> Result<PhysicalConstants, CliError> {
    PhysicalConstants::new(cfg.constants.m, cfg.constants.omega, cfg.constants.hbar)
        .map_err(Into::into)
}

fn params(cfg: &ScenarioConfig, pc: PhysicalConstants) -> Result<LindbladParams, CliError> {
    match (&cfg.params, &cfg.coefficients) {
        (Some(p), None) => {
            let lambda = p
                .lambda
                .ok_or_else(|| CliError::config("params.lambda is required"))?;
            let d_qq = p
                .d_qq
                .ok_or_else(|| CliError::config("params.d_qq is required"))?;
            let d_pp = p
                .d_pp
                .ok_or_else(|| CliError::config("params.d_pp is required"))?;
            LindbladParams::new(pc, lambda, d_qq, d_pp, p.d_pq).map_err(Into::into)
        }
        (None, Some(c)) => {
            let coeffs = GeneratorCoefficients {
                a1: Complex64::new(c.a1[0], c.a1[1]),
                a2: Complex64::new(c.a2[0], c.a2[1]),
                b1: Complex64::new(c.b1[0], c.b1[1]),
                b2: Complex64::new(c.b2[0], c.b2[1]),
            };
            coefficients_to_parameters(&coeffs, &pc).map_err(Into::into)
        }
        (None, None) => Err(CliError::config(
            "either params or coefficients is required",
        )),
        (Some(_), Some(_)) => Err(CliError::config(
            "params and coefficients are mutually exclusive; give exactly one",
        )),
    }
}

fn initial_state(
    cfg: &ScenarioConfig,
    pc: &PhysicalConstants,
) -> Result<Option<CovarianceMatrix>, CliError> {
    let Some(initial) = &cfg.initial_state else {
        return Ok(None);
    };
    if let Some(s) = &initial.shape {
        let shape = lindblad_sieve::ShapeDecomposition::new(s.area, s.theta, s.aleph)?;
        return Ok(Some(compose(&shape, pc)));
    }
    if let Some(c) = &initial.covariance {
        let sigma_qq = c
            .sigma_qq
            .ok_or_else(|| CliError::config("initial_state.covariance.sigma_qq is required"))?;
        let sigma_pp = c
            .sigma_pp
            .ok_or_else(|| CliError::config("initial_state.covariance.sigma_pp is required"))?;
        return Ok(Some(CovarianceMatrix::new(
            sigma_qq, sigma_pp, c.sigma_pq, pc,
        )?));
    }
    Err(CliError::config(
        "initial_state needs either shape or covariance",
    ))
}

fn eval_time(cfg: &ScenarioConfig, lambda: f64) -> f64 {
    match cfg.sieve.eval_time {
        crate::config::EvalTime::Time(t) => t,
        // "auto": late enough that the initial-shape term dominated by
        // e^{-4 lambda t} is negligible against the e^{-2 lambda t} one.
        crate::config::EvalTime::Keyword(_) => 10.0 / lambda,
    }
}

fn grid_spec(cfg: &ScenarioConfig) -> GridSpec {
    let g = &cfg.sieve.grid;
    GridSpec {
        theta_samples: g.theta_samples,
        aleph_samples: g.aleph_samples,
        aleph_min: g.aleph_min,
        aleph_max: g.aleph_max,
        refine_rounds: g.refine_rounds,
    }
}

fn sink(cfg: &ScenarioConfig) -> Sink {
    Sink::new(cfg.output.path.clone())
}

fn config_echo(cfg: &ScenarioConfig) -> Value {
    serde_json::to_value(cfg).expect("configs serialize")
}

fn stationary_json(stationary: &CovarianceMatrix, pc: &PhysicalConstants) -> Value {
    json!({
        "sigma_qq": num(stationary.sigma_qq()),
        "sigma_pp": num(stationary.sigma_pp()),
        "sigma_pq": num(stationary.sigma_pq()),
        "det": num(stationary.det()),
        "area": num(stationary.area(pc)),
    })
}

/// Dimensionless difference entries `(dx, dy, dz)` between two states.
fn scaled_difference(
    a: &CovarianceMatrix,
    b: &CovarianceMatrix,
    pc: &PhysicalConstants,
) -> (f64, f64, f64) {
    let mw = pc.m() * pc.omega();
    (
        mw * (a.sigma_qq() - b.sigma_qq()),
        (a.sigma_pp() - b.sigma_pp()) / mw,
        a.sigma_pq() - b.sigma_pq(),
    )
}

pub fn run_evolve(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let pc = constants(cfg)?;
    let params = params(cfg, pc)?;
    let sigma0 = initial_state(cfg, &pc)?
        .ok_or_else(|| CliError::config("initial_state is required for evolve"))?;
    let time_grid = cfg
        .time_grid
        .as_ref()
        .ok_or_else(|| CliError::config("time_grid is required for evolve"))?;
    let times = time_grid.resolve(pc.omega());

    let mut rows: Vec<[f64; 7]> = Vec::with_capacity(times.len());
    for t in times {
        let sigma = evolve(&sigma0, t, &params)?;
        let area = sigma.area(&pc);
        rows.push([
            t,
            sigma.sigma_qq(),
            sigma.sigma_pp(),
            sigma.sigma_pq(),
            sigma.det(),
            area,
            entropy(area)?,
        ]);
    }

    let stationary = stationary_covariance(&params);
    let content = match cfg.output.format {
        OutputFormat::Csv => {
            let mut csv = Csv::new(
                "t [time],sigma_qq [length^2],sigma_pp [momentum^2],sigma_pq [action],\
                 det_sigma [action^2],area [1],entropy [nat]",
            );
            for row in &rows {
                csv.float_row(row);
            }
            csv.finish()
        }
        OutputFormat::Json => {
            let columns = [
                "t",
                "sigma_qq",
                "sigma_pp",
                "sigma_pq",
                "det_sigma",
                "area",
                "entropy",
            ];
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|row| Value::Array(row.iter().copied().map(num).collect()))
                .collect();
            json_envelope(
                config_echo(cfg),
                json!({ "columns": columns, "rows": json_rows }),
                json!({
                    "stationary": stationary_json(&stationary, &pc),
                    "stationary_entropy": num(entropy(stationary.area(&pc))?),
                    "positivity_margin": num(params.positivity_margin()),
                }),
            )
        }
    };
    sink(cfg).write(&content)
}

pub fn run_sieve(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let pc = constants(cfg)?;
    let params = params(cfg, pc)?;
    let t_eval = eval_time(cfg, params.lambda());
    let point = sieve_kernels(t_eval, &params)?;

    let closed = optimal_squeezing_closed_form(&params);
    let kernel_route = optimal_shape_from_kernels(&point);
    let numeric = optimal_shape_numeric(&point, &grid_spec(cfg));

    // The e^{-4 lambda t} term the sieve drops, for the state it actually
    // selects (or the configured initial state, if one is given).
    let sigma0 = match initial_state(cfg, &pc)? {
        Some(sigma) => sigma,
        None => compose(&kernel_route.shape(), &pc),
    };
    let stationary = stationary_covariance(&params);
    let (dx, dy, dz) = scaled_difference(&sigma0, &stationary, &pc);
    let dropped_term =
        ((-4.0 * params.lambda() * t_eval).exp() * (dx * dy - dz * dz)).abs();

    let base = 1.0 / params.lambda();
    let independence = sieve_time_independence_check(
        &params,
        &[0.0, 0.5 * base, base, 5.0 * base, 25.0 * base],
    )?;

    let content = match cfg.output.format {
        OutputFormat::Csv => {
            let mut csv = Csv::new(
                "eval_time [time],aleph_closed [1],aleph_kernels [1],aleph_numeric [1],\
                 theta_star [rad],objective [action^2],dropped_term [action^2],\
                 cross_residual [1],degenerate [0/1]",
            );
            let mut fields: Vec<String> = [
                t_eval,
                closed,
                kernel_route.aleph_star,
                numeric.aleph_star,
                kernel_route.theta_star,
                kernel_route.objective_value,
                dropped_term,
                numeric.cross_residual.unwrap_or(0.0),
            ]
            .iter()
            .copied()
            .map(fmt_f64)
            .collect();
            fields.push(u8::from(kernel_route.degenerate).to_string());
            csv.row(&fields);
            csv.finish()
        }
        OutputFormat::Json => json_envelope(
            config_echo(cfg),
            json!({
                "eval_time": num(t_eval),
                "aleph_star": {
                    "closed_form": num(closed),
                    "from_kernels": num(kernel_route.aleph_star),
                    "numeric": num(numeric.aleph_star),
                },
                "theta_star": num(kernel_route.theta_star),
                "canonical": {
                    "aleph": num(kernel_route.canonical_aleph()),
                    "theta": num(kernel_route.canonical_theta()),
                },
                "objective_value": num(kernel_route.objective_value),
                "numeric": {
                    "theta_star": num(numeric.theta_star),
                    "objective_value": num(numeric.objective_value),
                    "cross_residual": numeric.cross_residual.map(num).unwrap_or(Value::Null),
                },
                "dropped_term": num(dropped_term),
                "degenerate": kernel_route.degenerate,
            }),
            json!({
                "kernels": {
                    "t_pp": num(point.t_pp()),
                    "t_qq": num(point.t_qq()),
                    "t_pq": num(point.t_pq()),
                    "trace": num(point.trace()),
                    "anisotropy": num(point.anisotropy()),
                },
                "stationary": stationary_json(&stationary, &pc),
                "positivity_margin": num(params.positivity_margin()),
                "time_independence": {
                    "aleph_spread": num(independence.aleph_spread),
                    "tolerance": num(independence.tolerance),
                    "passed": independence.passed,
                },
            }),
        ),
    };
    sink(cfg).write(&content)
}

#[derive(Clone, Copy)]
struct ScanPoint {
    lambda: f64,
    omega: f64,
    d_qq: f64,
    d_pp: f64,
    d_pq: f64,
}

impl ScanPoint {
    fn label(&self) -> String {
        format!(
            "lambda={} omega={} d_qq={} d_pp={} d_pq={}",
            fmt_f64(self.lambda),
            fmt_f64(self.omega),
            fmt_f64(self.d_qq),
            fmt_f64(self.d_pp),
            fmt_f64(self.d_pq)
        )
    }

    fn json(&self) -> Vec<(String, Value)> {
        vec![
            ("lambda".into(), num(self.lambda)),
            ("omega".into(), num(self.omega)),
            ("d_qq".into(), num(self.d_qq)),
            ("d_pp".into(), num(self.d_pp)),
            ("d_pq".into(), num(self.d_pq)),
        ]
    }
}

pub fn run_scan(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let pc0 = constants(cfg)?;
    let scan = cfg
        .scan
        .as_ref()
        .ok_or_else(|| CliError::config("scan section is required for scan"))?;
    let axes: Vec<(&str, Vec<f64>)> = scan
        .axes()
        .into_iter()
        .map(|(name, range)| (name, range.values()))
        .collect();

    // Base values; any parameter covered by an axis does not need one.
    let (base_lambda, base_d_qq, base_d_pp, base_d_pq) = if let Some(c) = &cfg.coefficients {
        let coeffs = GeneratorCoefficients {
            a1: Complex64::new(c.a1[0], c.a1[1]),
            a2: Complex64::new(c.a2[0], c.a2[1]),
            b1: Complex64::new(c.b1[0], c.b1[1]),
            b2: Complex64::new(c.b2[0], c.b2[1]),
        };
        let p = coefficients_to_parameters(&coeffs, &pc0)?;
        (Some(p.lambda()), Some(p.d_qq()), Some(p.d_pp()), p.d_pq())
    } else {
        let p = cfg.params.unwrap_or_default();
        (p.lambda, p.d_qq, p.d_pp, p.d_pq)
    };
    let has_axis = |name: &str| axes.iter().any(|(n, _)| *n == name);
    let require = |value: Option<f64>, name: &str| -> Result<f64, CliError> {
        if has_axis(name) {
            Ok(value.unwrap_or(f64::NAN))
        } else {
            value.ok_or_else(|| {
                CliError::config(format!("params.{name} is required (no scan axis covers it)"))
            })
        }
    };
    let base = ScanPoint {
        lambda: require(base_lambda, "lambda")?,
        omega: pc0.omega(),
        d_qq: require(base_d_qq, "d_qq")?,
        d_pp: require(base_d_pp, "d_pp")?,
        d_pq: base_d_pq,
    };

    let grid = grid_spec(cfg);
    let total: usize = axes.iter().map(|(_, v)| v.len()).product();
    let mut valid_rows: Vec<(ScanPoint, f64, f64)> = Vec::new();
    let mut skipped: Vec<(ScanPoint, String)> = Vec::new();
    let mut events: Vec<Result<usize, usize>> = Vec::new(); // row order, Ok=valid idx
    let mut max_residual: f64 = 0.0;

    for flat in 0..total {
        let mut point = ScanPoint { ..base };
        let mut remainder = flat;
        for (name, values) in axes.iter().rev() {
            let value = values[remainder % values.len()];
            remainder /= values.len();
            match *name {
                "lambda" => point.lambda = value,
                "omega" => point.omega = value,
                "d_qq" => point.d_qq = value,
                "d_pp" => point.d_pp = value,
                "d_pq" => point.d_pq = value,
                _ => unreachable!(),
            }
        }
        let attempt = PhysicalConstants::new(pc0.m(), point.omega, pc0.hbar())
            .and_then(|pc| {
                LindbladParams::new(pc, point.lambda, point.d_qq, point.d_pp, point.d_pq)
            });
        match attempt {
            Err(err) => {
                events.push(Err(skipped.len()));
                skipped.push((point, err.to_string()));
            }
            Ok(params) => {
                let closed = optimal_squeezing_closed_form(&params);
                let kernels = sieve_kernels(0.0, &params).expect("t = 0 is valid");
                let numeric = optimal_shape_numeric(&kernels, &grid);
                let residual = (closed - numeric.aleph_star).abs();
                max_residual = max_residual.max(residual);
                events.push(Ok(valid_rows.len()));
                valid_rows.push((point, closed, numeric.aleph_star));
            }
        }
    }

    if valid_rows.is_empty() {
        return Err(CliError::config(format!(
            "scan produced no valid parameter points ({} skipped)",
            skipped.len()
        )));
    }

    let content = match cfg.output.format {
        OutputFormat::Csv => {
            let mut csv = Csv::new(
                "lambda [1/time],omega [1/time],d_qq [length^2/time],d_pp [momentum^2/time],\
                 d_pq [action/time],aleph_closed [1],aleph_numeric [1],residual [1]",
            );
            for event in &events {
                match event {
                    Ok(i) => {
                        let (p, closed, numeric) = &valid_rows[*i];
                        csv.float_row(&[
                            p.lambda,
                            p.omega,
                            p.d_qq,
                            p.d_pp,
                            p.d_pq,
                            *closed,
                            *numeric,
                            (closed - numeric).abs(),
                        ]);
                    }
                    Err(i) => {
                        let (p, reason) = &skipped[*i];
                        csv.comment(&format!("skipped {}: {reason}", p.label()));
                    }
                }
            }
            csv.comment(&format!(
                "summary points={} valid={} skipped={} max_residual={}",
                total,
                valid_rows.len(),
                skipped.len(),
                fmt_f64(max_residual)
            ));
            csv.finish()
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = valid_rows
                .iter()
                .map(|(p, closed, numeric)| {
                    let mut obj = serde_json::Map::new();
                    for (k, v) in p.json() {
                        obj.insert(k, v);
                    }
                    obj.insert("aleph_closed".into(), num(*closed));
                    obj.insert("aleph_numeric".into(), num(*numeric));
                    obj.insert("residual".into(), num((closed - numeric).abs()));
                    Value::Object(obj)
                })
                .collect();
            let skipped_json: Vec<Value> = skipped
                .iter()
                .map(|(p, reason)| {
                    let mut obj = serde_json::Map::new();
                    for (k, v) in p.json() {
                        obj.insert(k, v);
                    }
                    obj.insert("reason".into(), Value::String(reason.clone()));
                    Value::Object(obj)
                })
                .collect();
            json_envelope(
                config_echo(cfg),
                json!({
                    "rows": rows,
                    "summary": {
                        "points": total,
                        "valid": valid_rows.len(),
                        "skipped": skipped.len(),
                        "max_residual": num(max_residual),
                    },
                }),
                json!({ "skipped": skipped_json }),
            )
        }
    };
    sink(cfg).write(&content)
}

pub fn run_coeffs(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let pc = constants(cfg)?;
    let c = cfg.coefficients.as_ref().ok_or_else(|| {
        CliError::config("coefficients section (or --a1/--b1 flags) is required for coeffs")
    })?;
    let coeffs = GeneratorCoefficients {
        a1: Complex64::new(c.a1[0], c.a1[1]),
        a2: Complex64::new(c.a2[0], c.a2[1]),
        b1: Complex64::new(c.b1[0], c.b1[1]),
        b2: Complex64::new(c.b2[0], c.b2[1]),
    };
    let params = coefficients_to_parameters(&coeffs, &pc)?;
    let bound = (params.lambda() * pc.hbar() / 2.0).powi(2);

    let content = match cfg.output.format {
        OutputFormat::Csv => {
            let mut csv = Csv::new(
                "lambda [1/time],d_qq [length^2/time],d_pp [momentum^2/time],\
                 d_pq [action/time],positivity_margin [(action/time)^2]",
            );
            csv.float_row(&[
                params.lambda(),
                params.d_qq(),
                params.d_pp(),
                params.d_pq(),
                params.positivity_margin(),
            ]);
            csv.finish()
        }
        OutputFormat::Json => json_envelope(
            config_echo(cfg),
            json!({
                "lambda": num(params.lambda()),
                "d_qq": num(params.d_qq()),
                "d_pp": num(params.d_pp()),
                "d_pq": num(params.d_pq()),
                "positivity_margin": num(params.positivity_margin()),
            }),
            json!({
                "positivity_bound": num(bound),
                "saturates_bound": params.positivity_margin().abs() <= 1e-12 * bound,
            }),
        ),
    };
    sink(cfg).write(&content)
}
