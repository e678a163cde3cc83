//! The fifteen acceptance criteria, one line each. Run with `--nocapture` to see the lines.

use std::path::Path;
use std::process::Command;

use qfock_core::bounds::{bound_table, verify_bounds, BoundChecks};
use qfock_core::conjugate::conjugate_series;
use qfock_core::fock::{build_space, inner_words, InnerVariant, TruncatedFock, Word};
use qfock_core::model::{build_model, classify_type, Block, Mode, ModelConfig, TypeLabel};
use qfock_core::oracle::{check_dual, check_gram, pairing_oracle, ORACLE_CAP};
use qfock_core::suite::{conjugate_suite, dual_suite, fock_suite, lipschitz_suite};
use qfock_core::{CheckResult, Model, Rational, Scalar, SeriesSign, SuiteConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Residual tolerance for float-mode identities.
const FLOAT_TOL: f64 = 1e-10;
const SEED: u64 = 20_260_101;

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

fn demo<S: Scalar>(mode: Mode) -> Model<S> {
    build_model(&ModelConfig::demo().with_mode(mode)).unwrap()
}

fn demo_exact() -> Model<Rational> {
    demo(Mode::Exact)
}

/// Random symmetric `q` over `c` components with entries `k/10`, `|k| <= 9`.
fn random_q(rng: &mut ChaCha8Rng, c: usize) -> Vec<Vec<Rational>> {
    let mut q = vec![vec![r(0, 1); c]; c];
    for i in 0..c {
        for j in i..c {
            let x = r(rng.gen_range(-9..=9), 10);
            q[i][j] = x.clone();
            q[j][i] = x;
        }
    }
    q
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Summarises engine checks: passes when every one passed and there is at least one.
fn from_checks(checks: &[CheckResult], what: &str) -> Outcome {
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
    let worst = checks.iter().map(|c| c.residual).fold(0.0f64, f64::max);
    outcome(
        !checks.is_empty() && failed.is_empty(),
        format!("{} {what} checks, largest measured value {worst:.3e}, failed {failed:?}", checks.len()),
    )
}

fn select(checks: Vec<CheckResult>, prefixes: &[&str]) -> Vec<CheckResult> {
    checks.into_iter().filter(|c| prefixes.iter().any(|p| c.name.starts_with(p))).collect()
}

fn suite_cfg(n: usize) -> SuiteConfig {
    SuiteConfig { truncation: n, seed: SEED, ..SuiteConfig::default() }
}

fn c1_gram_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut models: Vec<Model<Rational>> = vec![demo_exact()];
    for _ in 0..2 {
        let q = random_q(&mut rng, 3);
        let cfg = ModelConfig::new(&["a", "b", "c"], vec![Block::fixed("a"), Block::fixed("b"), Block::fixed("c")], q);
        models.push(build_model(&cfg).unwrap());
    }
    let mut levels = 0;
    for m in &models {
        let s = build_space(m, 5).unwrap();
        for n in 0..=5 {
            let rep = check_gram(&s, n, ORACLE_CAP).unwrap();
            if !rep.pass || rep.max_discrepancy != 0.0 {
                return outcome(false, format!("exact mismatch at level {n}: {}", rep.max_discrepancy));
            }
            levels += 1;
        }
    }
    let f: Model<f64> = demo(Mode::Float);
    let s = build_space(&f, 5).unwrap();
    let worst = (0..=5).map(|n| check_gram(&s, n, ORACLE_CAP).unwrap().max_discrepancy).fold(0.0, f64::max);
    outcome(worst <= FLOAT_TOL, format!("{levels} exact levels equal; float max {worst:.3e} <= {FLOAT_TOL:e}"))
}

fn c2_inner_variants() -> Outcome {
    let m = demo_exact();
    let s = build_space(&m, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut compared = 0;
    for n in 0..=4 {
        let dim = s.index.dim(n);
        for _ in 0..100 {
            let (u, v) = (s.index.word_at(n, rng.gen_range(0..dim)), s.index.word_at(n, rng.gen_range(0..dim)));
            let g = s.gram_entry(s.index.index(&u), s.index.index(&v));
            for variant in InnerVariant::ALL {
                if inner_words(&m, &u, &v, variant) != g {
                    return outcome(false, format!("{variant:?} differs on {u} / {v}"));
                }
                compared += 1;
            }
        }
    }
    outcome(true, format!("{compared} variant evaluations equal the Gram entry exactly"))
}

fn c3_positivity() -> Outcome {
    let q = vec![vec![r(9, 10), r(-9, 10)], vec![r(-9, 10), r(9, 10)]];
    let cfg = ModelConfig::new(&["a", "b"], vec![Block::pair("a", r(2, 1)), Block::fixed("b")], q);
    let m: Model<Rational> = build_model(&cfg).unwrap();
    let s = build_space(&m, 6).unwrap();
    let mins: Vec<f64> = (0..=6).map(|n| s.min_eigenvalue(n)).collect();
    let pivots = (0..=6).all(|n| s.pivots_positive(n));
    let min = mins.iter().cloned().fold(f64::INFINITY, f64::min);
    outcome(min > 0.0 && pivots, format!("q_max 0.9, d 3, N 6: min eigenvalue {min:.3e} > 0, LDL pivots positive {pivots}"))
}

fn c4_adjoint_commutation() -> Outcome {
    let s = build_space(&demo_exact(), 6).unwrap();
    let mut checks = select(fock_suite(&s, &suite_cfg(6)), &["fock.adjointness", "fock.commutation"]);
    let f = build_space(&demo::<f64>(Mode::Float), 6).unwrap();
    let float = select(fock_suite(&f, &suite_cfg(6)), &["fock.adjointness", "fock.commutation"]);
    checks.extend(float.into_iter().map(|c| CheckResult::compare(c.name, c.residual, FLOAT_TOL)));
    from_checks(&checks, "adjointness/commutation (exact and float, tol 1e-10)")
}

fn c5_dual_system() -> Outcome {
    let s = build_space(&demo_exact(), 6).unwrap();
    let mut checks = select(dual_suite(&s, &suite_cfg(6)), &["dual.commutator", "dual.kills_vacuum"]);
    let f = build_space(&demo::<f64>(Mode::Float), 6).unwrap();
    let float = select(dual_suite(&f, &suite_cfg(6)), &["dual.commutator"]);
    checks.extend(float.into_iter().map(|c| CheckResult::compare(c.name, c.residual, FLOAT_TOL)));
    from_checks(&checks, "commutator/vacuum (exact and float, tol 1e-10)")
}

fn c6_dual_oracle() -> Outcome {
    let m = demo_exact();
    let s = build_space(&m, 5).unwrap();
    for a in 0..m.d {
        let rep = check_dual(&s, a, 5, ORACLE_CAP).unwrap();
        if !rep.pass || rep.max_discrepancy != 0.0 {
            return outcome(false, format!("generator {a}: {}", rep.inputs));
        }
    }
    outcome(true, format!("dual formula equals commutator oracle on all words <= 5 letters, {} generators, exact", m.d))
}

fn c7_pairing() -> Outcome {
    let m = demo_exact();
    let s = build_space(&m, 6).unwrap();
    let degree = 2 * 3 - 1;
    for a in 0..m.d {
        let rep = pairing_oracle(&s, a, degree, SeriesSign::Alternating);
        if !rep.pass {
            return outcome(false, format!("generator {a}: {}", rep.inputs));
        }
    }
    let plain_rejected = (0..m.d).any(|a| !pairing_oracle(&s, a, degree, SeriesSign::Plain).pass);
    outcome(plain_rejected, format!("all monomials of degree <= {degree} pair exactly at M = 3; unsigned series rejected {plain_rejected}"))
}

fn c8_majorants() -> Outcome {
    let m = demo_exact();
    let s = build_space(&m, 6).unwrap();
    let t = bound_table(&m, 6, 3).unwrap();
    let mut worst = 0.0f64;
    for a in 0..m.d {
        let series = conjugate_series(&s, a, 3).unwrap();
        for (k, norm) in series.term_norms(&s).into_iter().enumerate() {
            if norm > t.xi_majorant[k] {
                return outcome(false, format!("a={a} m={}: {norm} > {}", k + 1, t.xi_majorant[k]));
            }
            if t.xi_majorant[k] > 0.0 {
                worst = worst.max(norm / t.xi_majorant[k]);
            }
        }
    }
    let Some(onset) = t.xi_ratio_onset(64) else {
        return outcome(false, "majorant ratio never drops below 1 up to m = 64");
    };
    let ratios_ok = (onset..=64).all(|k| t.xi_ratio(k) < 1.0);
    outcome(ratios_ok, format!("max norm/majorant {worst:.3}; ratio < 1 for m in {onset}..=64"))
}

fn c9_haagerup() -> Outcome {
    let m = demo_exact();
    let s = build_space(&m, 6).unwrap();
    let t = bound_table(&m, 6, 3).unwrap();
    let checks = BoundChecks { haagerup_samples: 50, haagerup_max_level: 4, lipschitz_terms: 0, seed: SEED, ..BoundChecks::default() };
    from_checks(&select(verify_bounds(&s, &t, &checks), &["bounds.haagerup"]), "sandwich (50 vectors per level, n <= 4)")
}

fn c10_wick() -> Outcome {
    let m = demo_exact();
    let s = build_space(&m, 6).unwrap();
    let mut checks = select(conjugate_suite(&s, &suite_cfg(6)), &["conjugate.wick_polynomial"]);
    let t = bound_table(&m, 6, 3).unwrap();
    let bc = BoundChecks { haagerup_samples: 0, wick_max_len: 4, lipschitz_terms: 0, ..BoundChecks::default() };
    checks.extend(select(verify_bounds(&s, &t, &bc), &["bounds.wick_word"]));
    from_checks(&checks, "Wick polynomial and n! B^n A^n")
}

fn c11_difference_quotient() -> Outcome {
    let s = build_space(&demo_exact(), 6).unwrap();
    from_checks(&select(conjugate_suite(&s, &suite_cfg(6)), &["conjugate.difference_quotient"]), "partition vs Leibniz (exact)")
}

fn c12_lipschitz() -> Outcome {
    let s = build_space(&demo_exact(), 6).unwrap();
    from_checks(&select(lipschitz_suite(&s, &suite_cfg(6)), &["lipschitz.partial"]), "tensor norm vs majorant, m <= 3")
}

fn c13_classifier() -> Outcome {
    let cases: [(&[(i64, i64)], TypeLabel<Rational>); 4] = [
        (&[(1, 1), (1, 1)], TypeLabel::II1),
        (&[(4, 1), (1, 4)], TypeLabel::IIILambda(r(1, 4))),
        (&[(4, 1), (1, 4), (8, 1), (1, 8)], TypeLabel::IIILambda(r(1, 2))),
        (&[(2, 1), (1, 2), (3, 1), (1, 3)], TypeLabel::III1),
    ];
    let mut got = Vec::new();
    for (eig, want) in cases {
        let xs: Vec<Rational> = eig.iter().map(|&(p, q)| r(p, q)).collect();
        let label = classify_type(&xs, 0.0).unwrap();
        if label != want {
            return outcome(false, format!("{xs:?} gave {label}, expected {want}"));
        }
        got.push(label.to_string());
    }
    outcome(true, got.join(", "))
}

fn c14_q_zero(s: &TruncatedFock<Rational>) -> Outcome {
    let m = &s.model;
    for n in 0..=s.n {
        for (i, row) in s.gram_dense(n).iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if *x != if i == j { r(1, 1) } else { r(0, 1) } {
                    return outcome(false, format!("Gram level {n} not the identity at ({i},{j})"));
                }
            }
        }
    }
    for a in 0..m.d {
        let series = conjugate_series(s, a, 3).unwrap();
        let mut expect = s.zero_vector();
        for b in 0..m.d {
            expect.axpy(&m.k[b][a], &s.basis_vector(&Word::new(vec![b])));
        }
        if series.partial_sum != expect || series.terms[1..].iter().any(|t| !t.is_zero()) {
            return outcome(false, format!("generator {a}: series differs from the closed form"));
        }
    }
    outcome(true, format!("Gram = I for n <= {}; xi equals the closed form; terms m >= 2 vanish", s.n))
}

fn c15_determinism() -> Outcome {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/demo.json");
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_qfock"))
            .env("QFOCK_THREADS", threads)
            .arg("--config")
            .arg(&config)
            .args(["--omit-timings", "verify", "--suite", "all"])
            .output()
            .unwrap()
    };
    let (one, four) = (run("1"), run("4"));
    let identical = one.stdout == four.stdout;
    let ok = one.status.success() && four.status.success() && identical && !one.stdout.is_empty();
    outcome(ok, format!("exit {:?}/{:?}, reports byte-identical {identical} ({} bytes)", one.status.code(), four.status.code(), one.stdout.len()))
}

#[test]
fn acceptance() {
    let q0 = ModelConfig::new(&["a", "b"], vec![Block::pair("a", r(2, 1)), Block::fixed("b")], vec![vec![r(0, 1); 2]; 2]);
    let q0_space = build_space(&build_model::<Rational>(&q0).unwrap(), 6).unwrap();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("gram equivalence", Box::new(c1_gram_equivalence)),
        ("four-variant inner product", Box::new(c2_inner_variants)),
        ("positivity", Box::new(c3_positivity)),
        ("adjointness and commutation", Box::new(c4_adjoint_commutation)),
        ("dual system", Box::new(c5_dual_system)),
        ("dual formula vs oracle", Box::new(c6_dual_oracle)),
        ("conjugate pairing gate", Box::new(c7_pairing)),
        ("series majorants", Box::new(c8_majorants)),
        ("haagerup sandwich", Box::new(c9_haagerup)),
        ("wick power series", Box::new(c10_wick)),
        ("difference quotient", Box::new(c11_difference_quotient)),
        ("lipschitz partials", Box::new(c12_lipschitz)),
        ("type classifier", Box::new(c13_classifier)),
        ("q = 0 degeneration", Box::new(move || c14_q_zero(&q0_space))),
        ("determinism", Box::new(c15_determinism)),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        println!("[{}] {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
