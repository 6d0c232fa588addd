//! Seeded verification suites behind `modtrace verify`.
//!
//! Every suite draws its own samples from a ChaCha8 stream keyed by the
//! seed and the suite's position in [`SUITES`], so a suite's cases do not
//! depend on which other suites were selected or on thread scheduling.

use std::thread;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::braid::{
    braiding, braiding_inverse, double_braiding_f, e_operator, e_operator_duality_holds, e_operator_left, twist,
    twist_closed,
};
use crate::cyclo::{fmt_rational, rat, CycNumber, Rational};
use crate::diagram::{apply_move, evaluate, parse, renormalized_invariant, Bindings, Move};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::moncat::{compose, compose_all, dual_mor, hom_basis, ptr_right, tensor_mor, Module, Morphism};
use crate::mtrace::{
    check_duality_trace, check_two_sided, default_d0, modified_dim_closed, modified_dim_hopf, modified_dim_product_form,
    modified_dim_ratio_form, modified_dim_sum_form, modified_trace,
};
use crate::uqsl2::{
    casimir_matrix, casimir_matrix_fe, chebyshev_check, check_relations, dual_module, is_generic_param,
    is_regular_param, simple_nilpotent, tensor_module, Params,
};

/// Suite names in report order.
pub const SUITES: [&str; 7] = ["chebyshev", "diagram", "dims", "e_op", "hexagon", "ribbon", "trace"];

pub const MAX_DENOMINATOR: i64 = 12;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub ell: u64,
    pub samples: usize,
    pub seed: u64,
    pub suites: Vec<String>,
}

impl VerifyConfig {
    pub fn new(ell: u64, samples: usize, seed: u64) -> Self {
        VerifyConfig {
            ell,
            samples,
            seed,
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Case {
    pub input: Value,
    pub pass: bool,
    pub witness: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub name: String,
    pub cases: Vec<Case>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub ell: u64,
    pub seed: u64,
    pub samples: usize,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed())
    }

    pub fn to_json(&self) -> Value {
        let suites: Vec<Value> = self
            .suites
            .iter()
            .map(|s| {
                let cases: Vec<Value> = s
                    .cases
                    .iter()
                    .map(|c| json!({"input": c.input, "pass": c.pass, "witness": c.witness}))
                    .collect();
                json!({"name": s.name, "pass": s.passed(), "cases": cases})
            })
            .collect();
        json!({
            "ell": self.ell,
            "seed": self.seed,
            "samples": self.samples,
            "sampling": {
                "rng": "ChaCha8, stream = suite index",
                "alpha": format!("n/d with 2 <= d <= {MAX_DENOMINATOR}, non-integer, generic; pairs and triples share d"),
            },
            "pass": self.passed(),
            "suites": suites,
        })
    }

    /// Human-readable summary table.
    pub fn to_table(&self) -> String {
        let mut out = format!("ell = {}  seed = {}  samples = {}\n", self.ell, self.seed, self.samples);
        for s in &self.suites {
            let ok = s.cases.iter().filter(|c| c.pass).count();
            let tag = if s.passed() { "PASS" } else { "FAIL" };
            out += &format!("{:<10} {tag}  {ok}/{} cases\n", s.name, s.cases.len());
            for c in s.cases.iter().filter(|c| !c.pass) {
                out += &format!("    {}  witness {}\n", c.input, c.witness);
            }
        }
        out += if self.passed() { "all suites PASS\n" } else { "some suites FAIL\n" };
        out
    }
}

/// Run the selected suites. Unknown suite names and ell < 3 are configuration errors
/// (ell = 2 is degenerate since q - 1/q = 0).
pub fn run_verify(cfg: &VerifyConfig) -> Result<Report> {
    let p = Params::new(cfg.ell)?;
    if !p.is_nondegenerate() {
        return Err(Error::DegenerateRoot(cfg.ell));
    }
    let mut chosen: Vec<usize> = Vec::new();
    for s in &cfg.suites {
        let i = SUITES
            .iter()
            .position(|n| n == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown suite '{s}'")))?;
        if !chosen.contains(&i) {
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    let suites = thread::scope(|sc| {
        let handles: Vec<_> = chosen
            .iter()
            .map(|&i| {
                let p = p.clone();
                sc.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    rng.set_stream(i as u64);
                    let mut smp = Sampler { p, rng };
                    SuiteReport {
                        name: SUITES[i].to_string(),
                        cases: run_suite(SUITES[i], &mut smp, cfg.samples),
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    Ok(Report {
        ell: cfg.ell,
        seed: cfg.seed,
        samples: cfg.samples,
        suites,
    })
}

struct Sampler {
    p: Params,
    rng: ChaCha8Rng,
}

impl Sampler {
    /// k parameters n_i/d with one shared d, accepted by `ok`.
    fn draw(&mut self, k: usize, ok: impl Fn(&Params, &[Rational]) -> bool) -> Vec<Rational> {
        loop {
            let d = self.rng.gen_range(2..=MAX_DENOMINATOR);
            let xs: Vec<Rational> = (0..k).map(|_| rat(self.rng.gen_range(-2 * d..=2 * d), d)).collect();
            let each = xs.iter().all(|a| !a.is_integer() && is_generic_param(&self.p, a));
            if each && ok(&self.p, &xs) {
                return xs;
            }
        }
    }

    fn alpha(&mut self) -> Rational {
        self.draw(1, |_, _| true).remove(0)
    }

    /// A pair whose tensor product lies in a regular grading.
    fn pair(&mut self) -> (Rational, Rational) {
        let xs = self.draw(2, |p, x| is_regular_param(p, &(&x[0] + &x[1])));
        (xs[0].clone(), xs[1].clone())
    }

    fn triple(&mut self) -> Vec<Rational> {
        self.draw(3, |_, _| true)
    }

    fn small(&mut self) -> i64 {
        self.rng.gen_range(-3..=3)
    }

    /// A random nonzero combination of a basis.
    fn combo(&mut self, basis: &[Morphism]) -> Result<Morphism> {
        loop {
            let cs: Vec<i64> = basis.iter().map(|_| self.small()).collect();
            if cs.iter().all(|&c| c == 0) {
                continue;
            }
            let mut acc = Morphism::zero(basis[0].dom(), basis[0].cod());
            for (c, b) in cs.iter().zip(basis) {
                if *c != 0 {
                    acc = acc.add(&b.scale(&CycNumber::from_int(*c)))?;
                }
            }
            return Ok(acc);
        }
    }
}

/// Failed checks of one case.
#[derive(Default)]
struct Checks {
    failed: Vec<Value>,
}

impl Checks {
    fn check(&mut self, name: &str, ok: bool) {
        if !ok {
            self.failed.push(json!({ "check": name }));
        }
    }

    fn eq(&mut self, name: &str, lhs: &CycNumber, rhs: &CycNumber) {
        if lhs != rhs {
            self.failed.push(json!({
                "check": name,
                "lhs": lhs.to_json(),
                "rhs": rhs.to_json(),
                "lhs_float": float(lhs),
                "rhs_float": float(rhs),
            }));
        }
    }
}

fn float(x: &CycNumber) -> [f64; 2] {
    let (re, im) = x.to_float();
    [re, im]
}

fn case(input: Value, body: impl FnOnce(&mut Checks) -> Result<()>) -> Case {
    let mut c = Checks::default();
    match body(&mut c) {
        Err(e) => Case {
            input,
            pass: false,
            witness: json!({ "error": e.to_string() }),
        },
        Ok(()) if c.failed.is_empty() => Case {
            input,
            pass: true,
            witness: Value::Null,
        },
        Ok(()) => Case {
            input,
            pass: false,
            witness: Value::Array(c.failed),
        },
    }
}

fn input(names: &[&str], xs: &[&Rational]) -> Value {
    let m: serde_json::Map<String, Value> = names
        .iter()
        .zip(xs)
        .map(|(n, x)| (n.to_string(), Value::String(fmt_rational(x))))
        .collect();
    Value::Object(m)
}

fn run_suite(name: &str, smp: &mut Sampler, samples: usize) -> Vec<Case> {
    match name {
        "chebyshev" => suite_chebyshev(smp, samples),
        "diagram" => suite_diagram(smp, samples),
        "dims" => suite_dims(smp, samples),
        "e_op" => suite_e_op(smp, samples),
        "hexagon" => suite_hexagon(smp, samples),
        "ribbon" => suite_ribbon(smp, samples),
        "trace" => suite_trace(smp, samples),
        _ => unreachable!("suite names are validated"),
    }
}

/// Eigenvalue of the Casimir on V_α: ξ^r (q^α + q^{-α}).
pub fn casimir_eigenvalue(p: &Params, alpha: &Rational) -> CycNumber {
    &p.qi(p.r as i64) * &(&p.q(alpha) + &p.q(&-alpha))
}

fn suite_chebyshev(smp: &mut Sampler, samples: usize) -> Vec<Case> {
    let p = smp.p.clone();
    (0..samples)
        .map(|_| {
            let (a, b) = smp.pair();
            case(input(&["alpha", "beta"], &[&a, &b]), |c| {
                let v = simple_nilpotent(&p, &a);
                let w = simple_nilpotent(&p, &b);
                let vw = tensor_module(&v, &w)?;
                c.check("relations V", check_relations(&v));
                c.check("relations V*", check_relations(&dual_module(&v)));
                c.check("relations V⊗W", check_relations(&vw));
                c.check("casimir forms agree on V", casimir_matrix(&v) == casimir_matrix_fe(&v));
                c.check("casimir forms agree on V⊗W", casimir_matrix(&vw) == casimir_matrix_fe(&vw));
                c.check("chebyshev identity on V", chebyshev_check(&v));
                c.check("chebyshev identity on V⊗W", chebyshev_check(&vw));
                let want = Matrix::scalar(v.dim, &casimir_eigenvalue(&p, &a));
                c.check("casimir eigenvalue on V", casimir_matrix(&v) == want);
                Ok(())
            })
        })
        .collect()
}

fn suite_dims(smp: &mut Sampler, samples: usize) -> Vec<Case> {
    let p = smp.p.clone();
    let r = CycNumber::from_int(p.r as i64);
    let mut cases = vec![case(json!({"alpha": "0"}), |c| {
        let v0 = simple_nilpotent(&p, &Rational::zero());
        c.eq("d(V_0) closed", &modified_dim_closed(&p, &Rational::zero())?, &default_d0(&p));
        c.eq("d(V_0) trace", &modified_trace(&Morphism::identity(&v0))?, &default_d0(&p));
        Ok(())
    })];
    for _ in 0..samples {
        let a = smp.alpha();
        cases.push(case(input(&["alpha"], &[&a]), |c| {
            let v = simple_nilpotent(&p, &a);
            let d = modified_dim_closed(&p, &a)?;
            c.eq("closed = hopf", &d, &modified_dim_hopf(&v)?);
            c.eq("d(alpha) = d(-alpha)", &d, &modified_dim_closed(&p, &-&a)?);
            c.eq("ratio form", &d, &modified_dim_ratio_form(&p, &a)?);
            c.eq("product form", &d, &modified_dim_product_form(&p, &a)?);
            c.eq("sum form", &d, &modified_dim_sum_form(&p, &a)?);
            c.eq("t(Id_V) = d", &modified_trace(&Morphism::identity(&v))?, &d);
            c.eq("d(V*) = d(V)", &modified_trace(&Morphism::identity(&dual_module(&v)))?, &d);
            let v0 = simple_nilpotent(&p, &Rational::zero());
            let pr = ptr_right(&double_braiding_f(&v)?, &v0, &v)?;
            match pr.scalar() {
                Some(s) => c.eq("ptr_R(f_V) = r Id", &s, &r),
                None => c.check("ptr_R(f_V) is scalar", false),
            }
            Ok(())
        }));
    }
    cases
}

fn suite_ribbon(smp: &mut Sampler, samples: usize) -> Vec<Case> {
    let p = smp.p.clone();
    (0..samples)
        .map(|_| {
            let (a, b) = smp.pair();
            case(input(&["alpha", "beta"], &[&a, &b]), |c| {
                let v = simple_nilpotent(&p, &a);
                let w = simple_nilpotent(&p, &b);
                let tv = twist(&v)?;
                c.check("theta_{V*} = theta_V*", twist(&dual_module(&v))? == dual_mor(&tv));
                if p.ell % 2 == 1 {
                    match tv.scalar() {
                        Some(s) => c.eq("theta_V closed form", &s, &twist_closed(&p, &a)),
                        None => c.check("theta_V is scalar", false),
                    }
                }
                let vw = tensor_module(&v, &w)?;
                let t = twist(&vw)?;
                c.check("theta_{T*} = theta_T* on T = V⊗W", twist(&dual_module(&vw))? == dual_mor(&t));
                let balanced = compose_all(&[
                    &tensor_mor(&tv, &twist(&w)?)?,
                    &braiding(&w, &v)?,
                    &braiding(&v, &w)?,
                ])?;
                c.check("theta_{V⊗W} = (theta_V⊗theta_W) c_{W,V} c_{V,W}", t == balanced);
                Ok(())
            })
        })
        .collect()
}

fn suite_e_op(smp: &mut Sampler, samples: usize) -> Vec<Case> {
    let p = smp.p.clone();
    (0..samples)
        .map(|_| {
            let (a, b) = smp.pair();
            case(input(&["alpha", "beta"], &[&a, &b]), |c| {
                let v = simple_nilpotent(&p, &a);
                let w = simple_nilpotent(&p, &b);
                let ev = e_operator(&v)?;
                c.check("E_V = Id", ev.is_identity());
                c.check("left form of E_V = Id", e_operator_left(&v)?.is_identity());
                let vw = tensor_module(&v, &w)?;
                let evw = e_operator(&vw)?;
                c.check("E_{V⊗W} = Id", evw.is_identity());
                c.check("E_{V⊗W} = E_V ⊗ E_W", evw == tensor_mor(&ev, &e_operator(&w)?)?);
                c.check("(E_V)* E_{V*} = Id", e_operator_duality_holds(&v)?);
                Ok(())
            })
        })
        .collect()
}

fn suite_hexagon(smp: &mut Sampler, samples: usize) -> Vec<Case> {
    let p = smp.p.clone();
    (0..samples)
        .map(|_| {
            let t = smp.triple();
            let seed = smp.rng.gen::<u64>();
            case(input(&["alpha", "beta", "gamma"], &[&t[0], &t[1], &t[2]]), |c| {
                let [u, x, y]: [Module; 3] = [0, 1, 2].map(|i| simple_nilpotent(&p, &t[i]));
                let (iu, ix, iy) = (Morphism::identity(&u), Morphism::identity(&x), Morphism::identity(&y));
                let xy = tensor_module(&x, &y)?;
                let h1 = compose(
                    &tensor_mor(&ix, &braiding(&u, &y)?)?,
                    &tensor_mor(&braiding(&u, &x)?, &iy)?,
                )?;
                c.check("c_{U,X⊗Y} = (Id⊗c_{U,Y})(c_{U,X}⊗Id)", braiding(&u, &xy)? == h1);
                let xu = tensor_module(&x, &u)?;
                let h2 = compose(
                    &tensor_mor(&braiding(&x, &y)?, &iu)?,
                    &tensor_mor(&ix, &braiding(&u, &y)?)?,
                )?;
                c.check("c_{X⊗U,Y} = (c_{X,Y}⊗Id)(Id⊗c_{U,Y})", braiding(&xu, &y)? == h2);
                let cxy = braiding(&x, &y)?;
                let cinv = braiding_inverse(&x, &y)?;
                c.check("c c^{-1} = Id", compose(&cxy, &cinv)?.is_identity());
                c.check("c^{-1} c = Id", compose(&cinv, &cxy)?.is_identity());
                // naturality of c_{-,U} in an endomorphism of X⊗Y
                let mut sub = Sampler {
                    p: p.clone(),
                    rng: ChaCha8Rng::seed_from_u64(seed),
                };
                let f = sub.combo(&hom_basis(&xy, &xy)?)?;
                let lhs = compose(&tensor_mor(&iu, &f)?, &braiding(&xy, &u)?)?;
                let rhs = compose(&braiding(&xy, &u)?, &tensor_mor(&f, &iu)?)?;
                c.check("naturality (Id⊗f) c = c (f⊗Id)", lhs == rhs);
                Ok(())
            })
        })
        .collect()
}

fn suite_trace(smp: &mut Sampler, samples: usize) -> Vec<Case> {
    let p = smp.p.clone();
    let mut cases = Vec::new();
    for _ in 0..samples {
        let (a, b) = smp.pair();
        let v = simple_nilpotent(&p, &a);
        let w = simple_nilpotent(&p, &b);
        let bases = (|| -> Result<_> {
            let vw = tensor_module(&v, &w)?;
            let wv = tensor_module(&w, &v)?;
            Ok((hom_basis(&vw, &wv)?, hom_basis(&wv, &vw)?, hom_basis(&vw, &vw)?))
        })();
        let (fwd, back, end) = match bases {
            Ok(x) => x,
            Err(e) => {
                cases.push(case(input(&["alpha", "beta"], &[&a, &b]), |_| Err(e)));
                continue;
            }
        };
        // four random intertwiner pairs per sample
        for k in 0..4 {
            let f = smp.combo(&fwd);
            let g = smp.combo(&back);
            let h = smp.combo(&end);
            let mut inp = input(&["alpha", "beta"], &[&a, &b]);
            inp["pair"] = json!(k);
            cases.push(case(inp, |c| {
                let (f, g, h) = (f?, g?, h?);
                c.check("dim Hom(V⊗W, W⊗V) = r", fwd.len() == p.r as usize);
                c.eq(
                    "t(g f) = t(f g)",
                    &modified_trace(&compose(&g, &f)?)?,
                    &modified_trace(&compose(&f, &g)?)?,
                );
                c.check("t(h) = t(ptr_R h) = t(ptr_L h)", check_two_sided(&h, &v, &w)?);
                c.check("t(h) = t(h*)", check_duality_trace(&h)?);
                Ok(())
            }));
        }
    }
    cases
}

fn header(ell: u64, names: &[(&str, &Rational)]) -> String {
    let mut s = format!("param ell = {ell}\n");
    for (n, a) in names {
        s += &format!("let {n} = nilpotent(alpha={})\n", fmt_rational(a));
    }
    s
}

/// Open Hopf link: closed loop Z on the left, section V.
pub fn hopf_link_text(ell: u64, loop_alpha: &Rational, section_alpha: &Rational) -> String {
    header(ell, &[("Z", loop_alpha), ("V", section_alpha)])
        + "slice cupl(Z) id(V+)\nslice id(Z-) xp(Z+,V+)\nslice id(Z-) xp(V+,Z+)\nslice capl(Z) id(V+)\n"
}

fn suite_diagram(smp: &mut Sampler, samples: usize) -> Vec<Case> {
    let p = smp.p.clone();
    let ell = p.ell;
    let bind = Bindings::new();
    let r = CycNumber::from_int(p.r as i64);
    (0..samples)
        .map(|_| {
            let (a, b) = smp.pair();
            case(input(&["alpha", "beta"], &[&a, &b]), |c| {
                // unknot and kinks
                let unknot = parse(&(header(ell, &[("V", &a)]) + "slice id(V+)\n"))?;
                let d = modified_dim_closed(&p, &a)?;
                c.eq("F'(unknot) = d", &renormalized_invariant(&unknot, &bind)?, &d);
                let kinks = apply_move(&unknot, &Move::FramedR1InsertPair { level: 1, pos: 0 })?;
                c.check("opposite kinks: F = Id", evaluate(&kinks, &bind)?.is_identity());
                c.eq("opposite kinks: F' = d", &renormalized_invariant(&kinks, &bind)?, &d);
                let kink =
                    parse(&(header(ell, &[("V", &a)]) + "slice id(V+) cupr(V)\nslice xp(V+,V+) id(V-)\nslice id(V+) capr(V)\n"))?;
                let v = simple_nilpotent(&p, &a);
                c.check("positive kink = theta_V", evaluate(&kink, &bind)? == twist(&v)?);

                // Hopf links and the cut
                let want = &default_d0(&p) * &r;
                let zero = Rational::zero();
                let h = parse(&hopf_link_text(ell, &zero, &a))?;
                let hr = apply_move(&h, &Move::RotateCut)?;
                c.eq("Hopf link cut on V_alpha", &renormalized_invariant(&h, &bind)?, &want);
                c.eq("Hopf link cut on V_0", &renormalized_invariant(&hr, &bind)?, &want);
                let g = parse(&hopf_link_text(ell, &b, &a))?;
                let gr = apply_move(&g, &Move::RotateCut)?;
                c.eq(
                    "Hopf link (alpha, beta) under rotate_cut",
                    &renormalized_invariant(&g, &bind)?,
                    &renormalized_invariant(&gr, &bind)?,
                );

                // R2 and R3 on braids
                let two = parse(&(header(ell, &[("A", &a), ("B", &b)]) + "slice id(A+) id(B+)\n"))?;
                for positive_first in [true, false] {
                    let m = apply_move(&two, &Move::R2Insert { level: 1, pos: 0, positive_first })?;
                    c.check("R2 insert: F = Id", evaluate(&m, &bind)?.is_identity());
                    c.check("R2 delete restores", apply_move(&m, &Move::R2Delete { slice: 1 })? == two);
                }
                let sigma = header(ell, &[("A", &a), ("B", &b)])
                    + "slice xp(A+,B+) id(A+)\nslice id(B+) xp(A+,A+)\nslice xp(B+,A+) id(A+)\n";
                let s = parse(&sigma)?;
                let s2 = apply_move(&s, &Move::R3Slide { slice: 0 })?;
                c.check("R3 slide: F unchanged", evaluate(&s, &bind)? == evaluate(&s2, &bind)?);
                let split = apply_move(&s, &Move::SplitSlice { slice: 0, at: 1 })?;
                c.check("slice split: F unchanged", evaluate(&split, &bind)? == evaluate(&s, &bind)?);
                Ok(())
            })
        })
        .collect()
}

/// The report as compact JSON, or as a table with `pretty`.
pub fn report_string(r: &Report, pretty: bool) -> String {
    if pretty {
        r.to_table()
    } else {
        r.to_json().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampler_is_deterministic() {
        let p = Params::new(5).unwrap();
        let mk = || Sampler {
            p: p.clone(),
            rng: ChaCha8Rng::seed_from_u64(7),
        };
        let (mut s1, mut s2) = (mk(), mk());
        for _ in 0..10 {
            let (a, b) = s1.pair();
            assert_eq!((a.clone(), b.clone()), s2.pair());
            assert!(!a.is_integer() && *a.denom() <= MAX_DENOMINATOR.into());
            assert!(is_generic_param(&p, &a) && is_regular_param(&p, &(&a + &b)));
        }
    }

    #[test]
    fn small_run() {
        let mut cfg = VerifyConfig::new(3, 1, 1);
        cfg.suites = vec!["dims".into(), "chebyshev".into(), "dims".into()];
        let r = run_verify(&cfg).unwrap();
        assert_eq!(r.suites.len(), 2);
        assert_eq!(r.suites[0].name, "chebyshev");
        assert!(r.passed(), "{}", r.to_table());
        assert_eq!(r.to_json(), run_verify(&cfg).unwrap().to_json());
        cfg.suites = vec!["nope".into()];
        assert!(run_verify(&cfg).is_err());
        assert!(run_verify(&VerifyConfig::new(2, 1, 1)).is_err());
    }
}
