//! Modified dimensions and the modified trace on objects that split into
//! generic simples, plus the trace-axiom and b-condition checkers.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::braid::double_braiding_f;
use crate::cyclo::{fmt_rational, CycNumber, Rational};
use crate::error::{Error, Result};
use crate::moncat::{
    compose_all, decompose_semisimple, decompose_variant, dual_mor, hom_basis_with, ptr_left, ptr_right, Module,
    Morphism,
};
use crate::uqsl2::{is_generic_param, simple_nilpotent, tensor_module, ModuleDescriptor, Params};

/// d(V_0) under the default normalization, (-1)^{r-1}.
pub fn default_d0(p: &Params) -> CycNumber {
    CycNumber::from_int(if p.r % 2 == 1 { 1 } else { -1 })
}

fn require_generic(p: &Params, alpha: &Rational) -> Result<()> {
    if !is_generic_param(p, alpha) {
        return Err(Error::NonGenericParameter(format!(
            "{} at ell = {}",
            fmt_rational(alpha),
            p.ell
        )));
    }
    Ok(())
}

fn in_r_z(p: &Params, alpha: &Rational) -> bool {
    (alpha / Rational::from_integer((p.r as i64).into())).is_integer()
}

/// (-1)^{r-1} r [α]/[rα], or the product form when α ∈ rZ.
pub fn modified_dim_closed(p: &Params, alpha: &Rational) -> Result<CycNumber> {
    modified_dim_closed_with(p, alpha, &default_d0(p))
}

/// As `modified_dim_closed`, rescaled so that d(V_0) = d0.
pub fn modified_dim_closed_with(p: &Params, alpha: &Rational, d0: &CycNumber) -> Result<CycNumber> {
    require_generic(p, alpha)?;
    let raw = if in_r_z(p, alpha) {
        modified_dim_product_form(p, alpha)?
    } else {
        modified_dim_ratio_form(p, alpha)?
    };
    Ok(&(&raw * d0) * &default_d0(p))
}

fn sign_r1(p: &Params) -> CycNumber {
    default_d0(p)
}

/// (-1)^{r-1} r [α]/[rα].
pub fn modified_dim_ratio_form(p: &Params, alpha: &Rational) -> Result<CycNumber> {
    let r = Rational::from_integer((p.r as i64).into());
    let den = p.qint(&(&r * alpha));
    if den.is_zero() {
        return Err(Error::QuantumDenominatorZero(format!("[{}]", fmt_rational(&(&r * alpha)))));
    }
    Ok(&(&(&sign_r1(p) * &CycNumber::from_int(p.r as i64)) * &p.qint(alpha)) * &den.inv()?)
}

/// (-1)^{r-1} ∏_{j=1}^{r-1} [j]/[α+r-j].
pub fn modified_dim_product_form(p: &Params, alpha: &Rational) -> Result<CycNumber> {
    let mut acc = sign_r1(p);
    for j in 1..p.r as i64 {
        let den = p.qint(&(alpha + Rational::from_integer((p.r as i64 - j).into())));
        if den.is_zero() {
            return Err(Error::QuantumDenominatorZero(format!("[alpha + {}]", p.r as i64 - j)));
        }
        acc = &(&acc * &p.qi(j)) - &(&acc * &p.qi(-j));
        acc = &acc * &den.inv()?;
    }
    Ok(acc)
}

/// (-1)^{r-1} r / Σ_k q^{(r-1-2k)α}.
pub fn modified_dim_sum_form(p: &Params, alpha: &Rational) -> Result<CycNumber> {
    let r = p.r as i64;
    let mut s = CycNumber::zero();
    for k in 0..r {
        s = &s + &p.q(&(Rational::from_integer((r - 1 - 2 * k).into()) * alpha));
    }
    if s.is_zero() {
        return Err(Error::QuantumDenominatorZero("weight sum".into()));
    }
    Ok(&(&sign_r1(p) * &CycNumber::from_int(r)) * &s.inv()?)
}

/// d(V_0) ⟨ptr_R f_V⟩ / ⟨ptr_L f_V⟩ with f_V the double braiding with V_0.
pub fn modified_dim_hopf(v: &Module) -> Result<CycNumber> {
    if let ModuleDescriptor::Nilpotent(a) = &v.descriptor {
        require_generic(&v.params, a)?;
    }
    let p = &v.params;
    let v0 = simple_nilpotent(p, &Rational::zero());
    let f = double_braiding_f(v)?;
    let pr = ptr_right(&f, &v0, v)?.scalar().ok_or(Error::NotScalar)?;
    let pl = ptr_left(&f, &v0, v)?.scalar().ok_or(Error::NotScalar)?;
    if pl.is_zero() {
        return Err(Error::NotScalar);
    }
    Ok(&(&default_d0(p) * &pr) * &pl.inv()?)
}

/// t(f) = Σ_i d(V_i) ⟨p_i f ι_i⟩ over a decomposition into generic simples.
pub fn modified_trace(f: &Morphism) -> Result<CycNumber> {
    modified_trace_variant(f, 0)
}

/// The modified trace through the decomposition variant `variant`.
pub fn modified_trace_variant(f: &Morphism, variant: u64) -> Result<CycNumber> {
    let p = f.dom().params.clone();
    modified_trace_with(f, variant, &default_d0(&p))
}

pub fn modified_trace_with(f: &Morphism, variant: u64, d0: &CycNumber) -> Result<CycNumber> {
    if !f.is_endo() {
        return Err(Error::ShapeMismatch("modified trace of a non-endomorphism".into()));
    }
    let p = f.dom().params.clone();
    let parts = if variant == 0 {
        decompose_semisimple(f.dom())?
    } else {
        decompose_variant(f.dom(), variant)?
    };
    let mut dims: BTreeMap<Rational, CycNumber> = BTreeMap::new();
    let mut total = CycNumber::zero();
    for s in &parts {
        let inner = compose_all(&[&s.proj, f, &s.incl])?;
        if inner.is_zero() {
            continue;
        }
        let c = inner.scalar().ok_or(Error::NotScalar)?;
        let d = match dims.get(&s.gamma) {
            Some(d) => d.clone(),
            None => {
                let d = modified_dim_closed_with(&p, &s.gamma, d0)?;
                dims.insert(s.gamma.clone(), d.clone());
                d
            }
        };
        total = &total + &(&d * &c);
    }
    Ok(total)
}

/// t_{U⊗W}(f) = t_U(ptr_R f) and t_{U⊗W}(f) = t_W(ptr_L f).
pub fn check_two_sided(f: &Morphism, u: &Module, w: &Module) -> Result<bool> {
    let t = modified_trace(f)?;
    let right = modified_trace(&ptr_right(f, u, w)?)?;
    let left = modified_trace(&ptr_left(f, u, w)?)?;
    Ok(t == right && t == left)
}

/// t_P(f) = t_{P*}(f*).
pub fn check_duality_trace(f: &Morphism) -> Result<bool> {
    Ok(modified_trace(f)? == modified_trace(&dual_mor(f))?)
}

/// Outcome of the b-condition per summand: (γ, b(V_γ), Σ b b dim Hom).
pub type BConditionRows = Vec<(Rational, CycNumber, CycNumber)>;

/// Evaluate both sides of the b-condition for the summands of V_α ⊗ V_β.
/// Hom spaces are intertwiners for E, F, K.
pub fn b_condition_rows(
    p: &Params,
    b: &dyn Fn(&Rational) -> CycNumber,
    alpha: &Rational,
    beta: &Rational,
) -> Result<BConditionRows> {
    require_generic(p, alpha)?;
    require_generic(p, beta)?;
    require_generic(p, &(alpha + beta))?;
    let va = simple_nilpotent(p, alpha);
    let vb = simple_nilpotent(p, beta);
    let parts = decompose_semisimple(&tensor_module(&va, &vb)?)?;
    let r = p.r as i64;
    let shift = |x: &Rational, k: i64| x + Rational::from_integer((2 * k).into());
    let mut pairs = Vec::new();
    for i in 0..r {
        for j in 0..r {
            let a1 = shift(alpha, i);
            let b1 = shift(beta, j);
            let coef = &b(&a1) * &b(&b1);
            let t = tensor_module(&simple_nilpotent(p, &a1), &simple_nilpotent(p, &b1))?;
            pairs.push((coef, t));
        }
    }
    let mut rows = Vec::new();
    for s in parts {
        let mut sum = CycNumber::zero();
        for (coef, t) in &pairs {
            if coef.is_zero() {
                continue;
            }
            let n = hom_basis_with(&s.simple, t, false)?.len() as i64;
            sum = &sum + &(coef * &CycNumber::from_int(n));
        }
        rows.push((s.gamma.clone(), b(&s.gamma), sum));
    }
    Ok(rows)
}

pub fn check_b_condition(
    p: &Params,
    b: &dyn Fn(&Rational) -> CycNumber,
    alpha: &Rational,
    beta: &Rational,
) -> Result<bool> {
    Ok(b_condition_rows(p, b, alpha, beta)?.iter().all(|(_, lhs, rhs)| lhs == rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{rat, root_of_unity};
    use crate::moncat::{compose, hom_basis, Morphism};
    use crate::uqsl2::dual_module;

    #[test]
    fn closed_forms_agree() {
        for ell in 3..=8 {
            let p = Params::new(ell).unwrap();
            for a in [rat(1, 3), rat(-2, 5), rat(7, 4), rat(1, 6)] {
                if !is_generic_param(&p, &a) {
                    continue;
                }
                let d = modified_dim_closed(&p, &a).unwrap();
                assert_eq!(d, modified_dim_sum_form(&p, &a).unwrap());
                assert_eq!(d, modified_dim_product_form(&p, &a).unwrap(), "ell {ell} a {a}");
                assert_eq!(d, modified_dim_closed(&p, &-a.clone()).unwrap());
            }
            assert_eq!(modified_dim_closed(&p, &rat(0, 1)).unwrap(), default_d0(&p));
            assert!(matches!(
                modified_dim_closed(&p, &rat(1, 1)),
                Err(Error::NonGenericParameter(_))
            ));
        }
    }

    #[test]
    fn ell4_half() {
        let p = Params::new(4).unwrap();
        let z = root_of_unity(8, 1);
        let want = (&z + &z.inv().unwrap()).neg_ref();
        assert_eq!(modified_dim_closed(&p, &rat(1, 2)).unwrap(), want);
    }

    #[test]
    fn hopf_matches_closed() {
        for ell in 3..=6 {
            let p = Params::new(ell).unwrap();
            for a in [rat(1, 3), rat(0, 1), rat(-3, 4)] {
                let v = simple_nilpotent(&p, &a);
                assert_eq!(modified_dim_hopf(&v).unwrap(), modified_dim_closed(&p, &a).unwrap());
            }
        }
    }

    #[test]
    fn trace_basics() {
        let p = Params::new(3).unwrap();
        let a = simple_nilpotent(&p, &rat(1, 5));
        let b = simple_nilpotent(&p, &rat(1, 7));
        assert_eq!(
            modified_trace(&Morphism::identity(&a)).unwrap(),
            modified_dim_closed(&p, &rat(1, 5)).unwrap()
        );
        let t = tensor_module(&a, &b).unwrap();
        let id = Morphism::identity(&t);
        let mut want = CycNumber::zero();
        for k in 0..3 {
            want = &want + &modified_dim_closed(&p, &(rat(12, 35) + rat(2 - 2 * k, 1))).unwrap();
        }
        assert_eq!(modified_trace(&id).unwrap(), want);
        let hb = hom_basis(&t, &t).unwrap();
        let f = hb[0].add(&hb[1].scale(&p.qi(1))).unwrap();
        let g = hb[2].add(&hb[1]).unwrap();
        assert_eq!(
            modified_trace(&compose(&g, &f).unwrap()).unwrap(),
            modified_trace(&compose(&f, &g).unwrap()).unwrap()
        );
        assert_eq!(modified_trace(&f).unwrap(), modified_trace_variant(&f, 2).unwrap());
        assert!(check_two_sided(&f, &a, &b).unwrap());
        assert!(check_duality_trace(&f).unwrap());
        let z = Morphism::zero(&t, &t);
        assert!(modified_trace(&z).unwrap().is_zero());
        let ds = dual_module(&a);
        assert_eq!(
            modified_trace(&Morphism::identity(&ds)).unwrap(),
            modified_trace(&Morphism::identity(&a)).unwrap()
        );
    }

    #[test]
    fn b_condition() {
        let p = Params::new(3).unwrap();
        let (a, b) = (rat(1, 5), rat(1, 7));
        let c = |x: i64, y: i64| move |_: &Rational| CycNumber::from_frac(x, y);
        assert!(check_b_condition(&p, &c(1, 9), &a, &b).unwrap());
        assert!(!check_b_condition(&p, &c(1, 3), &a, &b).unwrap());
        assert!(check_b_condition(&p, &c(0, 1), &a, &b).unwrap());
        let d = |x: &Rational| modified_dim_closed(&p, x).unwrap();
        assert!(!check_b_condition(&p, &d, &a, &b).unwrap());
    }
}
