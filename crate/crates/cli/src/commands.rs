//! Command implementations, generic over the scalar backend.

use std::time::Instant;

use anyhow::{bail, Context, Result};
use qfock_core::conjugate::conjugate_series;
use qfock_core::fock::fields;
use qfock_core::oracle::{check_gram, gram_oracle, pairing_oracle};
use qfock_core::{
    bound_table, build_model, build_space, classify_type, run_suite, CheckResult, FockVector, Mode, Model, Rational,
    Scalar, SeriesSign, Status, Suite, TruncatedFock,
};
use serde_json::{json, Value};

use crate::config::Config;
use crate::report::{ModelEcho, Report};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Gram { level: usize },
    Verify { suite: Suite },
    Conjugate { alpha: usize, terms: usize },
    Classify,
    Bench { suite: String },
}

impl Command {
    pub fn label(&self) -> String {
        match self {
            Command::Validate => "validate".into(),
            Command::Gram { level } => format!("gram --level {level}"),
            Command::Verify { suite } => format!("verify --suite {suite}"),
            Command::Conjugate { alpha, terms } => format!("conjugate --alpha {alpha} --terms {terms}"),
            Command::Classify => "classify".into(),
            Command::Bench { suite } => format!("bench --suite {suite}"),
        }
    }
}

/// Builds the model in the configured backend and runs `cmd`.
pub fn execute(cfg: &Config, cmd: &Command) -> Result<Report> {
    match cfg.model.mode {
        Mode::Exact => run::<Rational>(cfg, cmd),
        Mode::Float => run::<f64>(cfg, cmd),
    }
}

fn run<S: Scalar>(cfg: &Config, cmd: &Command) -> Result<Report> {
    let model: Model<S> = build_model(&cfg.model).context("invalid model")?;
    let (checks, data) = match cmd {
        Command::Validate => validate(&model)?,
        Command::Gram { level } => gram(cfg, &model, *level)?,
        Command::Verify { suite } => {
            let space = build_space(&model, cfg.run.truncation)?;
            (run_suite(&space, *suite, &cfg.run), None)
        }
        Command::Conjugate { alpha, terms } => conjugate(cfg, &model, *alpha, *terms)?,
        Command::Classify => classify(cfg, &model)?,
        Command::Bench { suite } => bench(cfg, &model, suite)?,
    };
    Ok(Report::new(cmd.label(), ModelEcho::new(cfg, &model), checks, data))
}

fn render_matrix<S: Scalar>(m: &[Vec<S>]) -> Vec<Vec<String>> {
    m.iter().map(|row| row.iter().map(Scalar::render).collect()).collect()
}

fn render_vector<S: Scalar>(space: &TruncatedFock<S>, v: &FockVector<S>) -> Vec<Value> {
    v.nonzeros().map(|(i, c)| json!({ "word": space.index.word(i).letters(), "coeff": c.render() })).collect()
}

fn exact_flag<S: Scalar>(ok: bool) -> Option<bool> {
    S::EXACT.then_some(ok)
}

fn validate<S: Scalar>(model: &Model<S>) -> Result<(Vec<CheckResult>, Option<Value>)> {
    let tol = model.tolerance;
    let mut checks = Vec::new();

    let defect = model.involution_defect();
    checks.push(CheckResult::identity("model.involution", exact_flag::<S>(defect == 0.0), defect, tol));

    let mut spectrum_gap = 0.0f64;
    let mut closed = true;
    for x in &model.eigenvalues {
        let inv = S::one() / x.clone();
        let best = model
            .eigenvalues
            .iter()
            .map(|y| (y.clone() - inv.clone()).abs().to_f64())
            .fold(f64::INFINITY, f64::min);
        closed &= model.eigenvalues.contains(&inv);
        spectrum_gap = spectrum_gap.max(best);
    }
    checks.push(CheckResult::identity("model.spectrum_inversion", exact_flag::<S>(closed), spectrum_gap, tol));

    let mut cross = 0.0f64;
    let mut cross_exact = true;
    for a in 0..model.d {
        for b in 0..model.d {
            if model.comp[a] != model.comp[b] {
                cross = cross.max(model.k[a][b].abs().to_f64());
                cross_exact &= model.k[a][b].is_zero();
            }
        }
    }
    checks.push(CheckResult::identity("model.covariance_blocks", exact_flag::<S>(cross_exact), cross, tol));

    let space = build_space(model, 2)?;
    let f = fields(&space)?;
    let mut worst = S::zero();
    for a in 0..model.d {
        for b in 0..model.d {
            let moment = f[a].compose(&f[b]).apply(&space.vacuum()).get(0).clone();
            let d = (moment - model.k[a][b].clone()).abs();
            if d > worst {
                worst = d;
            }
        }
    }
    checks.push(CheckResult::identity(
        "model.covariance_moments",
        exact_flag::<S>(worst.is_zero()),
        worst.to_f64(),
        tol,
    ));

    let qmax = model.constants.q_max;
    checks.push(CheckResult::identity("model.q_max_below_one", Some(qmax < 1.0), qmax, 1.0));

    let k = &model.constants;
    let data = json!({
        "d": model.d,
        "generator_components": model.comp.iter().map(|&c| model.component_ids[c].clone()).collect::<Vec<_>>(),
        "j": render_matrix(&model.j),
        "k": render_matrix(&model.k),
        "eigenvalues": model.eigenvalues.iter().map(Scalar::render).collect::<Vec<_>>(),
        "constants": {
            "q_max": k.q_max, "b": k.b, "c": k.c, "a_wick": k.a_wick, "c_q": k.c_q, "w_q": k.w_q,
        },
    });
    Ok((checks, Some(data)))
}

fn gram<S: Scalar>(cfg: &Config, model: &Model<S>, level: usize) -> Result<(Vec<CheckResult>, Option<Value>)> {
    let space = build_space(model, level)?;
    let mut checks = Vec::new();
    let t = Instant::now();
    let min = space.min_eigenvalue(level);
    let ok = min > 0.0 && (!S::EXACT || space.pivots_positive(level));
    let mut c = CheckResult::identity(format!("gram.positivity[n={level}]"), Some(ok), min, 0.0);
    c.elapsed_ms = t.elapsed().as_millis() as u64;
    checks.push(c);
    if level <= cfg.run.oracle_cap {
        let t = Instant::now();
        let rep = check_gram(&space, level, cfg.run.oracle_cap)?;
        let tol = if S::EXACT { 0.0 } else { model.tolerance };
        let mut c = CheckResult::compare(format!("gram.oracle[n={level}]"), rep.max_discrepancy, tol);
        c.status = if rep.pass { Status::Pass } else { Status::Fail };
        c.elapsed_ms = t.elapsed().as_millis() as u64;
        checks.push(c);
    } else {
        checks.push(CheckResult::skipped(
            format!("gram.oracle[n={level}]"),
            format!("level above oracle cap {}", cfg.run.oracle_cap),
        ));
    }
    let words: Vec<Vec<usize>> = space.index.words(level).map(|w| w.letters().to_vec()).collect();
    let data = json!({
        "level": level,
        "dim": words.len(),
        "words": words,
        "matrix": render_matrix(&space.gram_dense(level)),
        "min_eigenvalue": min,
    });
    Ok((checks, Some(data)))
}

fn conjugate<S: Scalar>(
    cfg: &Config,
    model: &Model<S>,
    alpha: usize,
    terms: usize,
) -> Result<(Vec<CheckResult>, Option<Value>)> {
    if alpha >= model.d {
        bail!("--alpha {alpha} is out of range for d = {}", model.d);
    }
    if terms == 0 {
        bail!("--terms must be positive");
    }
    let n = cfg.run.truncation.max(2 * terms - 1);
    let space = build_space(model, n)?;
    let t = Instant::now();
    let series = conjugate_series(&space, alpha, terms)?;
    let ms = t.elapsed().as_millis() as u64;
    let norms = series.term_norms(&space);
    let table = bound_table(model, n, terms)?;
    let mut checks = Vec::new();
    for (i, (&norm, &maj)) in norms.iter().zip(&series.majorants).enumerate() {
        let mut c = CheckResult::compare(format!("conjugate.majorant[a={alpha},m={}]", i + 1), norm, maj);
        c.elapsed_ms = ms;
        checks.push(c);
    }
    let t = Instant::now();
    let rep = pairing_oracle(&space, alpha, 2 * terms - 1, SeriesSign::Alternating);
    let tol = if S::EXACT { 0.0 } else { model.tolerance };
    let mut c = CheckResult::compare(format!("conjugate.pairing[a={alpha}]"), rep.max_discrepancy, tol)
        .with_detail(rep.inputs.clone())
        .with_degrees(2 * terms as isize - 1);
    c.status = if rep.pass { Status::Pass } else { Status::Fail };
    c.elapsed_ms = t.elapsed().as_millis() as u64;
    checks.push(c);

    let data = json!({
        "alpha": alpha,
        "terms": terms,
        "truncation": n,
        "series": series.terms.iter().enumerate().map(|(i, v)| json!({
            "m": i + 1,
            "level": 2 * i + 1,
            "norm_t": norms[i],
            "majorant": series.majorants[i],
            "ratio": table.xi_ratio(i + 1),
            "coefficients": render_vector(&space, v),
        })).collect::<Vec<_>>(),
        "partial_sum": render_vector(&space, &series.partial_sum),
        "partial_sum_norm_t": space.norm(&series.partial_sum),
        "ratio_onset": table.xi_ratio_onset(64),
    });
    Ok((checks, Some(data)))
}

fn classify<S: Scalar>(cfg: &Config, model: &Model<S>) -> Result<(Vec<CheckResult>, Option<Value>)> {
    let (source, eigenvalues): (&str, Vec<S>) = match &cfg.eigenvalues {
        Some(list) => ("config", list.iter().map(S::from_rational).collect()),
        None => ("model", model.eigenvalues.clone()),
    };
    let t = Instant::now();
    let (check, data) = match classify_type(&eigenvalues, model.tolerance) {
        Ok(label) => {
            let lambda = match &label {
                qfock_core::TypeLabel::IIILambda(l) => Some(l.render()),
                _ => None,
            };
            let data = json!({
                "type": label.name(),
                "lambda": lambda,
                "label": label.to_string(),
                "eigenvalues": eigenvalues.iter().map(Scalar::render).collect::<Vec<_>>(),
                "source": source,
            });
            (CheckResult::identity("classify", Some(true), 0.0, 0.0).with_detail(label.to_string()), data)
        }
        Err(e) => (CheckResult::failed("classify", e.to_string()), json!({ "source": source })),
    };
    let mut check = check;
    check.elapsed_ms = t.elapsed().as_millis() as u64;
    Ok((vec![check], Some(data)))
}

/// Gram construction timed by recursion and by the permutation-sum oracle across thread counts.
fn bench<S: Scalar>(cfg: &Config, model: &Model<S>, suite: &str) -> Result<(Vec<CheckResult>, Option<Value>)> {
    if suite != "gram" {
        bail!("unknown bench suite `{suite}`; only `gram` is available");
    }
    let top = cfg.run.truncation.min(cfg.run.oracle_cap);
    let mut threads = vec![1, 2, 4];
    let avail = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    if !threads.contains(&avail) {
        threads.push(avail);
    }
    let mut rows = Vec::new();
    for &t in &threads {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build()?;
        for level in 1..=top {
            let (ms_rec, ms_oracle) = pool.install(|| -> Result<(f64, f64)> {
                let start = Instant::now();
                build_space(model, level)?;
                let rec = start.elapsed().as_secs_f64() * 1e3;
                let start = Instant::now();
                gram_oracle(model, level, cfg.run.oracle_cap)?;
                Ok((rec, start.elapsed().as_secs_f64() * 1e3))
            })?;
            rows.push(json!({ "strategy": "recursion", "threads": t, "level": level, "ms": ms_rec }));
            rows.push(json!({ "strategy": "oracle", "threads": t, "level": level, "ms": ms_oracle }));
        }
    }
    let space = build_space(model, top)?;
    let tol = if S::EXACT { 0.0 } else { model.tolerance };
    let mut checks = Vec::new();
    for level in 0..=top {
        let rep = check_gram(&space, level, cfg.run.oracle_cap)?;
        let mut c = CheckResult::compare(format!("bench.gram.agreement[n={level}]"), rep.max_discrepancy, tol);
        c.status = if rep.pass { Status::Pass } else { Status::Fail };
        checks.push(c);
    }
    Ok((checks, Some(json!({ "suite": suite, "timings": rows }))))
}
