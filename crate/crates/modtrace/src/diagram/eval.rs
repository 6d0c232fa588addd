use std::collections::HashMap;

use super::{Decl, Gen, Strand, TangleDiagram};
use crate::braid::{braiding, braiding_inverse};
use crate::cyclo::CycNumber;
use crate::error::{Error, Result};
use crate::moncat::{compose, duality_morphisms, tensor_mor, DualityMorphisms, Module, Morphism};
use crate::mtrace::modified_trace;
use crate::uqsl2::{dual_module, simple_nilpotent, tensor_module, trivial_module, Params};

/// Coupon name to morphism.
pub type Bindings = HashMap<String, Morphism>;

struct Env {
    params: Params,
    up: HashMap<String, Module>,
    down: HashMap<String, Module>,
    duality: HashMap<String, DualityMorphisms>,
}

impl Env {
    fn new(d: &TangleDiagram) -> Result<Env> {
        let params = Params::new(d.ell)?;
        let mut up: HashMap<String, Module> = HashMap::new();
        for (name, decl) in &d.decls {
            let get = |n: &String| up.get(n).cloned().ok_or_else(|| Error::UnknownName(n.clone()));
            let m = match decl {
                Decl::Nilpotent(a) => simple_nilpotent(&params, a),
                Decl::Dual(v) => dual_module(&*get(v)?),
                Decl::Tensor(a, b) => tensor_module(&*get(a)?, &*get(b)?)?,
                Decl::Trivial => trivial_module(&params),
            };
            up.insert(name.clone(), m);
        }
        Ok(Env {
            params,
            up,
            down: HashMap::new(),
            duality: HashMap::new(),
        })
    }

    fn object(&mut self, name: &str) -> Result<Module> {
        self.up.get(name).cloned().ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    fn strand(&mut self, s: &Strand) -> Result<Module> {
        let m = self.object(&s.obj)?;
        if s.up {
            return Ok(m);
        }
        Ok(self.down.entry(s.obj.clone()).or_insert_with(|| dual_module(&m)).clone())
    }

    fn duality(&mut self, name: &str) -> Result<&DualityMorphisms> {
        if !self.duality.contains_key(name) {
            let m = self.object(name)?;
            self.duality.insert(name.to_string(), duality_morphisms(&m)?);
        }
        Ok(&self.duality[name])
    }

    fn tensor_of(&mut self, strands: &[Strand]) -> Result<Module> {
        let mut acc = trivial_module(&self.params);
        for (i, s) in strands.iter().enumerate() {
            let m = self.strand(s)?;
            acc = if i == 0 { m } else { tensor_module(&acc, &m)? };
        }
        Ok(acc)
    }

    fn gen(&mut self, g: &Gen, bindings: &Bindings) -> Result<Morphism> {
        Ok(match g {
            Gen::Id(s) => Morphism::identity(&self.strand(s)?),
            Gen::CupR(v) => self.duality(v)?.coev_right.clone(),
            Gen::CupL(v) => self.duality(v)?.coev_left.clone(),
            Gen::CapR(v) => self.duality(v)?.ev_left.clone(),
            Gen::CapL(v) => self.duality(v)?.ev_right.clone(),
            Gen::Xp(a, b) => braiding(&self.strand(a)?, &self.strand(b)?)?,
            Gen::Xn(a, b) => braiding_inverse(&self.strand(b)?, &self.strand(a)?)?,
            Gen::Coupon { name, inputs, outputs } => {
                let f = bindings.get(name).ok_or_else(|| Error::UnboundCoupon(name.clone()))?;
                let dom = self.tensor_of(inputs)?;
                let cod = self.tensor_of(outputs)?;
                if !f.dom().same_as(&dom) || !f.cod().same_as(&cod) {
                    return Err(Error::DomainMismatch(format!(
                        "coupon {name} is bound to a morphism {} -> {}",
                        f.dom().label(),
                        f.cod().label()
                    )));
                }
                f.clone()
            }
        })
    }
}

/// The Reshetikhin-Turaev image of the diagram.
pub fn evaluate(d: &TangleDiagram, bindings: &Bindings) -> Result<Morphism> {
    d.type_check()?;
    let mut env = Env::new(d)?;
    let mut acc: Option<Morphism> = None;
    for s in &d.slices {
        let mut m: Option<Morphism> = None;
        for g in &s.gens {
            let x = env.gen(g, bindings)?;
            m = Some(match m {
                None => x,
                Some(prev) => tensor_mor(&prev, &x)?,
            });
        }
        let m = m.unwrap_or_else(|| Morphism::identity(&trivial_module(&env.params)));
        acc = Some(match acc {
            None => m,
            Some(prev) => compose(&m, &prev)?,
        });
    }
    Ok(acc.expect("parsed diagrams have a slice"))
}

/// F'(T) = t_V(F(T)) for a (1,1)-tangle with section V.
pub fn renormalized_invariant(d: &TangleDiagram, bindings: &Bindings) -> Result<CycNumber> {
    if !d.is_one_one() {
        return Err(Error::DomainMismatch(
            "renormalized invariant needs a (1,1)-tangle with one upward strand at both ends".into(),
        ));
    }
    modified_trace(&evaluate(d, bindings)?)
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;
    use crate::braid::{double_braiding_f, twist_closed};
    use crate::cyclo::rat;
    use crate::moncat::{hom_basis, ptr_left, ptr_right};
    use crate::mtrace::{default_d0, modified_dim_closed};

    fn hopf_left(ell: u64, alpha: &str) -> String {
        format!(
            "param ell = {ell}\nlet Z = nilpotent(alpha=0)\nlet V = nilpotent(alpha={alpha})\n\
             slice cupl(Z) id(V+)\nslice id(Z-) xp(Z+,V+)\nslice id(Z-) xp(V+,Z+)\nslice capl(Z) id(V+)\n"
        )
    }

    fn hopf_right(ell: u64, alpha: &str) -> String {
        format!(
            "param ell = {ell}\nlet Z = nilpotent(alpha=0)\nlet V = nilpotent(alpha={alpha})\n\
             slice id(Z+) cupr(V)\nslice xp(Z+,V+) id(V-)\nslice xp(V+,Z+) id(V-)\nslice id(Z+) capr(V)\n"
        )
    }

    #[test]
    fn identity_and_zigzag() {
        let d = parse("param ell = 4\nlet V = nilpotent(alpha=1/3)\nslice id(V+)\n").unwrap();
        assert!(evaluate(&d, &Bindings::new()).unwrap().is_identity());
        let z = parse(
            "param ell = 4\nlet V = nilpotent(alpha=1/3)\n\
             slice id(V+) cupl(V)\nslice capr(V) id(V+)\n",
        )
        .unwrap();
        assert!(evaluate(&z, &Bindings::new()).unwrap().is_identity());
        let z = parse(
            "param ell = 4\nlet V = nilpotent(alpha=1/3)\n\
             slice cupr(V) id(V+)\nslice id(V+) capl(V)\n",
        )
        .unwrap();
        assert!(evaluate(&z, &Bindings::new()).unwrap().is_identity());
    }

    #[test]
    fn unknot_and_kink() {
        let p = Params::new(5).unwrap();
        let d = parse("param ell = 5\nlet V = nilpotent(alpha=1/3)\nslice id(V+)\n").unwrap();
        assert_eq!(
            renormalized_invariant(&d, &Bindings::new()).unwrap(),
            modified_dim_closed(&p, &rat(1, 3)).unwrap()
        );
        let k = parse(
            "param ell = 5\nlet V = nilpotent(alpha=1/3)\n\
             slice id(V+) cupr(V)\nslice xp(V+,V+) id(V-)\nslice id(V+) capr(V)\n",
        )
        .unwrap();
        let f = evaluate(&k, &Bindings::new()).unwrap();
        assert_eq!(f.scalar().unwrap(), twist_closed(&p, &rat(1, 3)));
    }

    #[test]
    fn hopf_link_both_cuts() {
        for ell in [3, 4, 5] {
            let p = Params::new(ell).unwrap();
            let want = &default_d0(&p) * &CycNumber::from_int(p.r as i64);
            let left = parse(&hopf_left(ell, "1/3")).unwrap();
            let right = parse(&hopf_right(ell, "1/3")).unwrap();
            let b = Bindings::new();
            // matrix oracles
            let v = simple_nilpotent(&p, &rat(1, 3));
            let v0 = simple_nilpotent(&p, &rat(0, 1));
            let f = double_braiding_f(&v).unwrap();
            assert_eq!(evaluate(&left, &b).unwrap(), ptr_left(&f, &v0, &v).unwrap());
            assert_eq!(evaluate(&right, &b).unwrap(), ptr_right(&f, &v0, &v).unwrap());
            assert_eq!(renormalized_invariant(&left, &b).unwrap(), want, "ell {ell}");
            assert_eq!(renormalized_invariant(&right, &b).unwrap(), want, "ell {ell}");
        }
    }

    #[test]
    fn coupons() {
        let p = Params::new(3).unwrap();
        let a = simple_nilpotent(&p, &rat(1, 5));
        let b = simple_nilpotent(&p, &rat(1, 7));
        let t = tensor_module(&a, &b).unwrap();
        let hb = hom_basis(&t, &t).unwrap();
        let d = parse(
            "param ell = 3\nlet A = nilpotent(alpha=1/5)\nlet B = nilpotent(alpha=1/7)\n\
             slice coupon(f: A+ B+ -> A+ B+)\n",
        )
        .unwrap();
        let mut bind = Bindings::new();
        assert!(matches!(evaluate(&d, &bind), Err(Error::UnboundCoupon(_))));
        bind.insert("f".into(), hb[1].clone());
        assert_eq!(evaluate(&d, &bind).unwrap(), hb[1]);
        bind.insert("f".into(), Morphism::identity(&a));
        assert!(matches!(evaluate(&d, &bind), Err(Error::DomainMismatch(_))));
    }
}
