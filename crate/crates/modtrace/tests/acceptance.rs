//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! All comparisons are exact equalities in cyclotomic fields; there is no
//! numerical tolerance anywhere.

use std::collections::BTreeMap;
use std::process::ExitCode;

use modtrace::cyclo::{quantum_integer, rat, CycNumber, Rational};
use modtrace::moncat::{compose, decompose_semisimple, Morphism};
use modtrace::mtrace::{default_d0, modified_dim_closed};
use modtrace::rootsys::{build_root_system, general_modified_dimension};
use modtrace::uqsl2::{
    casimir_matrix, casimir_matrix_fe, chebyshev_check, check_relations, dual_module, grading_of, is_generic_param,
    is_regular_param, simple_nilpotent, tensor_module, GradingElement, Params,
};
use modtrace::verify::{run_verify, Report, VerifyConfig};
use modtrace::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exact equality: no tolerance.
const TOLERANCE: u32 = 0;
const ELLS: [u64; 6] = [3, 4, 5, 6, 7, 8];
const SAMPLES: usize = 5;
const SEED: u64 = 1;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Non-integer generic n/d, d <= 12; a pair shares d and has a regular sum.
fn samples(p: &Params, n: usize, seed: u64) -> Vec<(Rational, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.ell);
    let mut out = Vec::new();
    while out.len() < n {
        let d = rng.gen_range(2..=12i64);
        let a = rat(rng.gen_range(-2 * d..=2 * d), d);
        let b = rat(rng.gen_range(-2 * d..=2 * d), d);
        let ok = |x: &Rational| !x.is_integer() && is_generic_param(p, x);
        if ok(&a) && ok(&b) && is_regular_param(p, &(&a + &b)) {
            out.push((a, b));
        }
    }
    out
}

fn suite_pass(reports: &BTreeMap<u64, Report>, names: &[&str]) -> Outcome {
    let mut bad = Vec::new();
    let mut cases = 0;
    for (ell, r) in reports {
        for s in r.suites.iter().filter(|s| names.contains(&s.name.as_str())) {
            cases += s.cases.len();
            for c in s.cases.iter().filter(|c| !c.pass) {
                bad.push(format!("ell {ell} {} {} {}", s.name, c.input, c.witness));
            }
        }
    }
    if bad.is_empty() {
        outcome(true, format!("{cases} cases over ell 3..8"))
    } else {
        outcome(false, bad.join("; "))
    }
}

fn criterion1() -> Outcome {
    let mut n = 0;
    for ell in ELLS {
        let p = Params::new(ell).unwrap();
        let vs: Vec<_> = samples(&p, SAMPLES, SEED)
            .iter()
            .map(|(a, _)| simple_nilpotent(&p, a))
            .collect();
        for (i, v) in vs.iter().enumerate() {
            if !check_relations(v) || !check_relations(&dual_module(v)) {
                return outcome(false, format!("ell {ell}: {}", v.label()));
            }
            for w in &vs[i..] {
                let t = tensor_module(v, w).unwrap();
                if !check_relations(&t) || !check_relations(&dual_module(&t)) {
                    return outcome(false, format!("ell {ell}: {}", t.label()));
                }
                n += 1;
            }
        }
    }
    // ell = 2 has q - 1/q = 0, so [E,F] = (K - K^{-1})/(q - q^{-1}) is undefined
    let p2 = Params::new(2).unwrap();
    if p2.is_nondegenerate() || run_verify(&VerifyConfig::new(2, 1, SEED)).is_ok() {
        return outcome(false, "ell 2 was not flagged as degenerate");
    }
    outcome(
        true,
        format!("V, V* and {n} pairwise tensors (and their duals) over ell 3..8; ell 2 rejected as degenerate"),
    )
}

fn criterion2() -> Outcome {
    let mut literal_holds = Vec::new();
    let mut literal_fails = Vec::new();
    for ell in ELLS {
        let p = Params::new(ell).unwrap();
        let sign = CycNumber::from_int(if p.r.is_multiple_of(2) { 1 } else { -1 });
        let xi_r = p.qi(p.r as i64);
        let mut literal = true;
        for (a, b) in samples(&p, SAMPLES, SEED) {
            let v = simple_nilpotent(&p, &a);
            let t = tensor_module(&v, &simple_nilpotent(&p, &b)).unwrap();
            if casimir_matrix(&v) != casimir_matrix_fe(&v) || casimir_matrix(&t) != casimir_matrix_fe(&t) {
                return outcome(false, format!("ell {ell}: Casimir forms differ at alpha {a}"));
            }
            if !chebyshev_check(&v) || !chebyshev_check(&t) {
                return outcome(false, format!("ell {ell}: Chebyshev identity fails at alpha {a}, beta {b}"));
            }
            let sum = &p.q(&a) + &p.q(&-&a);
            let omega = casimir_matrix(&v);
            let Some(s) = omega.scalar_value() else {
                return outcome(false, format!("ell {ell}: Casimir is not scalar on V_{a}"));
            };
            if s != &xi_r * &sum {
                return outcome(false, format!("ell {ell}: Casimir eigenvalue is not xi^r (q^a + q^-a)"));
            }
            literal &= s == &sign * &sum;
        }
        if literal {
            literal_holds.push(ell);
        } else {
            literal_fails.push(ell);
        }
    }
    outcome(
        literal_fails.is_empty(),
        format!(
            "Casimir forms agree and the Chebyshev identity holds on V and V⊗W for all ell; \
             eigenvalue (-1)^r (q^a + q^-a) holds for ell {literal_holds:?}, fails for ell {literal_fails:?}; \
             the computed eigenvalue is xi^r (q^a + q^-a) at every ell"
        ),
    )
}

fn criterion5(reports: &BTreeMap<u64, Report>) -> Outcome {
    for ell in ELLS {
        let p = Params::new(ell).unwrap();
        let d0 = modified_dim_closed(&p, &Rational::from_integer(0.into())).unwrap();
        let want = CycNumber::from_int(if p.r % 2 == 1 { 1 } else { -1 });
        if d0 != want || default_d0(&p) != want {
            return outcome(false, format!("ell {ell}: d(V_0) = {d0}"));
        }
    }
    suite_pass(reports, &["dims"])
}

fn criterion8() -> Outcome {
    let mut n = 0;
    for ell in ELLS {
        let p = Params::new(ell).unwrap();
        let r = p.r as usize;
        for (a, b) in samples(&p, 2, SEED + 8) {
            let va = simple_nilpotent(&p, &a);
            let vb = simple_nilpotent(&p, &b);
            let t = tensor_module(&va, &vb).unwrap();
            let parts = match decompose_semisimple(&t) {
                Ok(s) => s,
                Err(e) => return outcome(false, format!("ell {ell}: {e}")),
            };
            if parts.len() != r || parts.iter().any(|s| s.simple.dim != r) {
                return outcome(false, format!("ell {ell}: {} summands", parts.len()));
            }
            let mut sum = Morphism::zero(&t, &t);
            for (i, x) in parts.iter().enumerate() {
                for (j, y) in parts.iter().enumerate() {
                    let pij = compose(&x.proj, &y.incl).unwrap();
                    let ok = if i == j { pij.is_identity() } else { pij.is_zero() };
                    if !ok {
                        return outcome(false, format!("ell {ell}: proj_{i} incl_{j} is wrong"));
                    }
                }
                sum = sum.add(&compose(&x.incl, &x.proj).unwrap()).unwrap();
            }
            if !sum.is_identity() {
                return outcome(false, format!("ell {ell}: the idempotents do not sum to Id"));
            }
            // the grading is multiplicative and regular, hence off the singular locus
            let g = grading_of(&t).unwrap();
            if g != grading_of(&va).unwrap().multiply(&grading_of(&vb).unwrap()) || g.is_singular() {
                return outcome(false, format!("ell {ell}: grading of V_{a} ⊗ V_{b}"));
            }
            n += 1;
        }
        // V_a ⊗ V_{-a} sits in the grading K^r = 1, on the singular locus
        let a = rat(1, 3);
        let t = tensor_module(&simple_nilpotent(&p, &a), &simple_nilpotent(&p, &-&a)).unwrap();
        if !grading_of(&t).unwrap().is_singular() {
            return outcome(false, format!("ell {ell}: V_a ⊗ V_-a should be singular"));
        }
        if !matches!(decompose_semisimple(&t), Err(Error::NotSemisimple(_))) {
            return outcome(false, format!("ell {ell}: V_a ⊗ V_-a should not split into simples"));
        }
    }
    // constructed gradings: singular iff (kappa^2 + 1 - eps phi) / kappa = ±2
    let c = CycNumber::from_int;
    let examples = [
        (3, 2, 2, true),
        (3, 1, 1, false),
        (-1, 0, 0, true),
        (2, 0, 0, false),
        (-3, 4, 4, true),
        (5, 1, 7, false),
    ];
    for (k, e, f, want) in examples {
        let g = GradingElement::new(c(k), c(e), c(f)).unwrap();
        let t = (k * k + 1 - e * f) as f64 / k as f64;
        let direct = t == 2.0 || t == -2.0;
        if g.is_singular() != want || direct != want {
            return outcome(false, format!("grading M({k},{e},{f})"));
        }
    }
    outcome(
        true,
        format!("{n} generic tensor products split into r simples of dim r; singular locus agrees on constructed gradings"),
    )
}

fn criterion9() -> Outcome {
    let a1 = build_root_system('A', 1).unwrap();
    for ell in [3u64, 5, 7] {
        let p = Params::new(ell).unwrap();
        for (mu, _) in samples(&p, SAMPLES, SEED + 9) {
            let d = general_modified_dimension(&a1, ell, std::slice::from_ref(&mu), &default_d0(&p)).unwrap();
            let r = Rational::from_integer(ell.into());
            let direct = (&CycNumber::from_int(ell as i64) * &quantum_integer(ell, &mu))
                .div(&quantum_integer(ell, &(&r * &mu)))
                .unwrap();
            if d != direct || d != modified_dim_closed(&p, &mu).unwrap() {
                return outcome(false, format!("A1 at ell {ell}, mu {mu}"));
            }
        }
    }
    let one = CycNumber::from_int(1);
    for (t, n) in [('A', 2), ('B', 2), ('G', 2)] {
        let rs = build_root_system(t, n).unwrap();
        for ell in [5u64, 7] {
            for (mu0, mu1) in [(rat(1, 3), rat(1, 4)), (rat(2, 5), rat(-1, 6)), (rat(1, 7), rat(3, 8))] {
                let mu = [mu0.clone(), mu1.clone()];
                let neg = [-mu0, -mu1];
                let d = general_modified_dimension(&rs, ell, &mu, &one);
                let dn = general_modified_dimension(&rs, ell, &neg, &one);
                match (d, dn) {
                    (Ok(x), Ok(y)) if x == y => {}
                    (Err(Error::SingularWeight(_)), Err(Error::SingularWeight(_))) => {}
                    _ => return outcome(false, format!("{t}{n} at ell {ell}: d(mu) != d(-mu)")),
                }
            }
        }
    }
    let table = [
        ('A', 1, 1),
        ('A', 2, 3),
        ('A', 3, 6),
        ('A', 4, 10),
        ('B', 2, 4),
        ('B', 3, 9),
        ('B', 4, 16),
        ('C', 3, 9),
        ('C', 4, 16),
        ('D', 4, 12),
        ('D', 5, 20),
        ('E', 6, 36),
        ('E', 7, 63),
        ('E', 8, 120),
        ('F', 4, 24),
        ('G', 2, 6),
    ];
    for (t, n, want) in table {
        let got = build_root_system(t, n).unwrap().num_positive();
        if got != want {
            return outcome(false, format!("{t}{n}: {got} positive roots, expected {want}"));
        }
    }
    outcome(true, "A1 reduces to r[mu]/[r mu]; d(mu) = d(-mu) for A2, B2, G2; 16 positive-root counts match")
}

fn criterion10() -> Outcome {
    let runs = [
        vec!["modtrace", "verify", "--ell", "5", "--samples", "5", "--seed", "1"],
        vec!["modtrace", "verify", "--ell", "4", "--samples", "5", "--seed", "1", "--suites", "ribbon"],
        vec!["modtrace", "verify", "--ell", "8", "--samples", "3", "--seed", "42"],
    ];
    for args in runs {
        let a = modtrace::cli::run(args.clone());
        let b = modtrace::cli::run(args.clone());
        if a.code != 0 || a.stdout != b.stdout || a.stdout.is_empty() {
            return outcome(false, format!("{}: exit {} / reports differ", args.join(" "), a.code));
        }
    }
    outcome(true, "three verify invocations reproduce byte-identical reports")
}

fn main() -> ExitCode {
    println!("acceptance: exact equality over cyclotomic fields, tolerance = {TOLERANCE}");
    let mut reports = BTreeMap::new();
    for ell in ELLS {
        reports.insert(ell, run_verify(&VerifyConfig::new(ell, SAMPLES, SEED)).expect("valid config"));
    }
    let results = [
        (1, "relations and Hopf structure", criterion1()),
        (2, "Casimir and Chebyshev", criterion2()),
        (3, "braiding", suite_pass(&reports, &["hexagon"])),
        (4, "ribbon", suite_pass(&reports, &["ribbon", "e_op"])),
        (5, "modified dimension", criterion5(&reports)),
        (6, "trace axioms", suite_pass(&reports, &["trace"])),
        (7, "diagram invariance", suite_pass(&reports, &["diagram"])),
        (8, "decomposition", criterion8()),
        (9, "general-g formula", criterion9()),
        (10, "determinism", criterion10()),
    ];
    let mut failed = 0;
    for (n, name, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} [{name}]: {tag}: {}", o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
