use num::{One, Zero};
use qfock_core::fock::*;
use qfock_core::model::{build_model, Block, Mode, ModelConfig};
use qfock_core::oracle::*;
use qfock_core::{Model, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

fn demo() -> Model<Rational> {
    build_model(&ModelConfig::demo()).unwrap()
}

/// Three fixed generators in three components with a random symmetric q, entries in [-0.9, 0.9].
fn random_three(rng: &mut ChaCha8Rng) -> ModelConfig {
    let mut q = vec![vec![r(0, 1); 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let x = r(rng.gen_range(-9..=9), 10);
            q[i][j] = x.clone();
            q[j][i] = x;
        }
    }
    ModelConfig::new(&["a", "b", "c"], vec![Block::fixed("a"), Block::fixed("b"), Block::fixed("c")], q)
}

#[test]
fn gram_oracle_small_levels() {
    let single = build_model::<Rational>(&ModelConfig::new(&["a"], vec![Block::fixed("a")], vec![vec![r(1, 3)]])).unwrap();
    assert_eq!(gram_oracle(&single, 0, ORACLE_CAP).unwrap(), vec![vec![Rational::one()]]);
    assert_eq!(gram_oracle(&single, 1, ORACLE_CAP).unwrap(), vec![vec![Rational::one()]]);
    assert_eq!(gram_oracle(&single, 2, ORACLE_CAP).unwrap(), vec![vec![r(4, 3)]]);
    assert_eq!(gram_oracle(&single, 3, ORACLE_CAP).unwrap()[0][0], r(4, 3) * (Rational::one() + r(1, 3) + r(1, 9)));
}

#[test]
fn gram_oracle_cap() {
    assert!(matches!(gram_oracle(&demo(), 6, ORACLE_CAP), Err(qfock_core::Error::CapExceeded { .. })));
}

#[test]
fn gram_oracle_matches_recursion() {
    let s = build_space(&demo(), 5).unwrap();
    for n in 0..=5 {
        let rep = check_gram(&s, n, ORACLE_CAP).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.max_discrepancy, 0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..2 {
        let m = build_model::<Rational>(&random_three(&mut rng)).unwrap();
        let s = build_space(&m, 4).unwrap();
        for n in 0..=4 {
            assert!(check_gram(&s, n, ORACLE_CAP).unwrap().pass);
        }
    }
}

#[test]
fn gram_oracle_float_mode() {
    let m = build_model::<f64>(&ModelConfig::demo().with_mode(Mode::Float)).unwrap();
    let s = build_space(&m, 4).unwrap();
    let rep = check_gram(&s, 4, ORACLE_CAP).unwrap();
    assert!(rep.pass && rep.max_discrepancy <= 1e-10, "{rep:?}");
}

#[test]
fn gram_oracle_detects_corruption() {
    let mut s = build_space(&demo(), 3).unwrap();
    s.perturb_gram(3, &r(1, 1000)).unwrap();
    assert!(!check_gram(&s, 3, ORACLE_CAP).unwrap().pass);
}

#[test]
fn dual_oracle_single_letter() {
    let m = demo();
    let s = build_space(&m, 3).unwrap();
    for a in 0..m.d {
        for b in 0..m.d {
            let got = dual_oracle(&s, a, &Word::new(vec![b]), ORACLE_CAP).unwrap();
            assert_eq!(got, s.vacuum().scaled(&m.k[b][a]));
        }
    }
}

#[test]
fn dual_oracle_even_words_miss_vacuum() {
    let m = demo();
    let s = build_space(&m, 4).unwrap();
    for n in [2, 4] {
        for w in s.index.words(n) {
            for a in 0..m.d {
                assert!(dual_oracle(&s, a, &w, ORACLE_CAP).unwrap().get(0).is_zero());
            }
        }
    }
}

#[test]
fn dual_oracle_matches_formula() {
    let m = demo();
    let s = build_space(&m, 5).unwrap();
    for a in 0..m.d {
        let rep = check_dual(&s, a, 5, ORACLE_CAP).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
    let pair = build_model::<Rational>(&ModelConfig::new(&["a"], vec![Block::pair("a", r(3, 1))], vec![vec![r(-2, 5)]])).unwrap();
    let s = build_space(&pair, 5).unwrap();
    assert!(check_dual(&s, 1, 5, ORACLE_CAP).unwrap().pass);
}

#[test]
fn dual_oracle_cap() {
    let s = build_space(&demo(), 6).unwrap();
    let w = Word::new(vec![0; 6]);
    assert!(dual_oracle(&s, 0, &w, ORACLE_CAP).is_err());
}

#[test]
fn pairing_gate() {
    let pair = build_model::<Rational>(&ModelConfig::new(&["a"], vec![Block::pair("a", r(2, 1))], vec![vec![r(1, 3)]])).unwrap();
    for m in [demo(), pair] {
        let s = build_space(&m, 5).unwrap();
        for a in 0..m.d {
            for cap in 1..=5 {
                let rep = pairing_oracle(&s, a, cap, SeriesSign::Alternating);
                assert!(rep.pass, "{rep:?}");
            }
        }
    }
}

#[test]
fn pairing_gate_rejects_plain_sign() {
    let s = build_space(&demo(), 5).unwrap();
    let failing = (0..2).filter(|&a| !pairing_oracle(&s, a, 5, SeriesSign::Plain).pass).count();
    assert!(failing > 0);
}

#[test]
fn pairing_gate_at_q_zero() {
    let m = build_model::<Rational>(&ModelConfig::new(&["a"], vec![Block::pair("a", r(2, 1))], vec![vec![r(0, 1)]])).unwrap();
    let s = build_space(&m, 6).unwrap();
    for a in 0..m.d {
        assert!(pairing_oracle(&s, a, 6, SeriesSign::Alternating).pass);
    }
}

#[test]
fn pairing_gate_even_top_degree() {
    // Both sides vanish on even monomials, so M = 3 covers every degree at N = 6.
    let s = build_space(&demo(), 6).unwrap();
    assert!(pairing_oracle(&s, 0, 6, SeriesSign::Alternating).pass);
}

#[test]
fn pairing_gate_reports_small_truncation() {
    let s = build_space(&demo(), 4).unwrap();
    let rep = pairing_oracle(&s, 0, 5, SeriesSign::Alternating);
    assert!(!rep.pass && rep.inputs.contains("exceeds truncation"));
}
