//! Braiding from the truncated quasi-R-matrix, twist, the operator 𝔈_V and
//! the double braiding f_V.
//!
//! c_{V,W} = τ ∘ HH ∘ Ř with Ř = Σ_{i<r} κ_i E^i ⊗ F^i and
//! κ_i = (1-q^{-2})^i (q-q^{-1})^i / ∏_{j≤i} (1-q^{-2j}).
//! The inverse quasi-R-matrix is Σ_{i<r} κ'_i E^i ⊗ F^i with
//! κ'_i = (1-q^2)^i (q^{-1}-q)^i / ∏_{j≤i} (1-q^{2j}).

use num_traits::Zero;

use crate::cyclo::{CycNumber, Rational};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::moncat::{compose, dual_mor, tensor_mor, Module, Morphism, Side};
use crate::uqsl2::{dual_module, simple_nilpotent, tensor_module, Params};

/// (κ_i, κ'_i) for i < r.
pub fn rmatrix_coeffs(p: &Params) -> (Vec<CycNumber>, Vec<CycNumber>) {
    let r = p.r as usize;
    let one = CycNumber::one();
    let b1 = p.bracket1();
    let a = &(&one - &p.qi(-2)) * &b1;
    let a_inv = &(&one - &p.qi(2)) * &b1.neg_ref();
    let mut kap = vec![one.clone()];
    let mut kap_inv = vec![one.clone()];
    for i in 1..r {
        let d = &one - &p.qi(-2 * i as i64);
        let d_inv = &one - &p.qi(2 * i as i64);
        kap.push(&(&kap[i - 1] * &a) * &d.inv().expect("1 - q^{-2i} vanishes only at i = r"));
        kap_inv.push(&(&kap_inv[i - 1] * &a_inv) * &d_inv.inv().expect("1 - q^{2i} vanishes only at i = r"));
    }
    (kap, kap_inv)
}

fn entries(m: &Matrix) -> Vec<(usize, usize, CycNumber)> {
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for (j, x) in m.row(i).iter().enumerate() {
            if !x.is_zero() {
                out.push((i, j, x.clone()));
            }
        }
    }
    out
}

fn powers(m: &Matrix, r: usize) -> Vec<Matrix> {
    let mut out = vec![Matrix::identity(m.rows())];
    for i in 1..r {
        let next = out[i - 1].mul(m);
        out.push(next);
    }
    out
}

fn coset(m: &Module) -> Rational {
    m.weight_coset().unwrap_or_else(Rational::zero)
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

/// Table of q^{sign (w_a w'_b - base)/2}.
fn weight_table(p: &Params, wa: &[Rational], wb: &[Rational], base: &Rational, sign: i64) -> Vec<Vec<CycNumber>> {
    let s = Rational::from_integer(sign.into()) * half();
    wa.iter()
        .map(|x| wb.iter().map(|y| p.q(&(&s * &(x * y - base)))).collect())
        .collect()
}

fn check_params(v: &Module, w: &Module) -> Result<()> {
    if v.params != w.params {
        return Err(Error::ParamsMismatch);
    }
    Ok(())
}

/// c_{V,W}: V ⊗ W -> W ⊗ V.
pub fn braiding(v: &Module, w: &Module) -> Result<Morphism> {
    check_params(v, w)?;
    let p = &v.params;
    let r = p.r as usize;
    let (n, m) = (v.dim, w.dim);
    let (kap, _) = rmatrix_coeffs(p);
    let base = coset(v) * coset(w);
    let tab = weight_table(p, &v.weights, &w.weights, &base, 1);
    let ep = powers(&v.e, r);
    let fp = powers(&w.f, r);
    let mut mat = Matrix::zeros(m * n, n * m);
    for i in 0..r {
        let fe = entries(&fp[i]);
        for (s, b, x) in entries(&ep[i]) {
            let kx = &kap[i] * &x;
            for (t, j, y) in &fe {
                let e = &mut mat[(t * n + s, b * m + j)];
                *e = &*e + &(&(&kx * y) * &tab[s][*t]);
            }
        }
    }
    let phase = p.q(&(&base * half()));
    Morphism::with_phase(tensor_module(v, w)?, tensor_module(w, v)?, mat, phase).checked()
}

/// c_{V,W}^{-1}: W ⊗ V -> V ⊗ W, from the closed-form inverse quasi-R-matrix.
pub fn braiding_inverse(v: &Module, w: &Module) -> Result<Morphism> {
    check_params(v, w)?;
    let p = &v.params;
    let r = p.r as usize;
    let (n, m) = (v.dim, w.dim);
    let (_, kap) = rmatrix_coeffs(p);
    let base = coset(v) * coset(w);
    let tab = weight_table(p, &v.weights, &w.weights, &base, -1);
    let ep = powers(&v.e, r);
    let fp = powers(&w.f, r);
    let mut mat = Matrix::zeros(n * m, m * n);
    for i in 0..r {
        let fe = entries(&fp[i]);
        for (s, b, x) in entries(&ep[i]) {
            let kx = &kap[i] * &x;
            for (t, j, y) in &fe {
                let e = &mut mat[(s * m + t, j * n + b)];
                *e = &*e + &(&(&kx * y) * &tab[b][*j]);
            }
        }
    }
    let phase = p.q(&(-(&base * half())));
    Morphism::with_phase(tensor_module(w, v)?, tensor_module(v, w)?, mat, phase).checked()
}

/// c_{V,W}^{-1} by exact inversion of the braiding matrix.
pub fn braiding_inverse_by_matrix(v: &Module, w: &Module) -> Result<Morphism> {
    let c = braiding(v, w)?;
    let inv = c.raw_matrix().inverse()?;
    let phase = c.phase().inv()?;
    Ok(Morphism::with_phase(c.cod().clone(), c.dom().clone(), inv, phase))
}

/// ptr_R or ptr_L of c_{V,V} (or of its inverse) without forming the braiding.
pub fn ptr_self_braiding(v: &Module, positive: bool, side: Side) -> Result<Morphism> {
    let p = &v.params;
    let r = p.r as usize;
    let n = v.dim;
    let (kap, kap_inv) = rmatrix_coeffs(p);
    let s = coset(v);
    let base = &s * &s;
    let sign = if positive { 1 } else { -1 };
    let tab = weight_table(p, &v.weights, &v.weights, &base, sign);
    let phi = v.pivot_diag();
    let pivot: Vec<CycNumber> = match side {
        Side::Right => phi,
        Side::Left => phi.iter().map(|x| x.inv()).collect::<Result<_>>()?,
    };
    let ep = powers(&v.e, r);
    let fp = powers(&v.f, r);
    // out_ab = Σ_i coef_i Σ_j X_i[a,j] g(a,j,b) Y_i[j,b]
    let (coef, first, second) = match (positive, side) {
        (true, Side::Right) => (&kap, &fp, &ep),
        (true, Side::Left) => (&kap, &ep, &fp),
        (false, Side::Right) => (&kap_inv, &ep, &fp),
        (false, Side::Left) => (&kap_inv, &fp, &ep),
    };
    let mut out = Matrix::zeros(n, n);
    for i in 0..r {
        let mut rows: Vec<Vec<(usize, CycNumber)>> = vec![Vec::new(); n];
        for (j, b, y) in entries(&second[i]) {
            rows[j].push((b, y));
        }
        for (a, j, x) in entries(&first[i]) {
            let cx = &(&coef[i] * &x) * &pivot[j];
            for (b, y) in &rows[j] {
                let g = if positive { &tab[a][j] } else { &tab[j][*b] };
                let e = &mut out[(a, *b)];
                *e = &*e + &(&(&cx * y) * g);
            }
        }
    }
    let phase = p.q(&(Rational::from_integer(sign.into()) * &base * half()));
    Morphism::with_phase(v.clone(), v.clone(), out, phase).checked()
}

/// θ_V = ptr_R(c_{V,V}).
pub fn twist(v: &Module) -> Result<Morphism> {
    ptr_self_braiding(v, true, Side::Right)
}

/// θ_V computed from the full braiding matrix; slow cross-check.
pub fn twist_by_matrix(v: &Module) -> Result<Morphism> {
    crate::moncat::ptr_right(&braiding(v, v)?, v, v)
}

/// q^{(α² - (r-1)²)/2}, the twist scalar on V_α.
pub fn twist_closed(p: &Params, alpha: &Rational) -> CycNumber {
    let r1 = Rational::from_integer((p.r as i64 - 1).into());
    p.q(&((alpha * alpha - &r1 * &r1) * half()))
}

/// 𝔈_V = ptr_R(c^{-1}_{V,V}) ∘ ptr_R(c_{V,V}).
pub fn e_operator(v: &Module) -> Result<Morphism> {
    compose(
        &ptr_self_braiding(v, false, Side::Right)?,
        &ptr_self_braiding(v, true, Side::Right)?,
    )
}

/// The left-handed form ptr_L(c^{-1}_{V,V}) ∘ ptr_L(c_{V,V}).
pub fn e_operator_left(v: &Module) -> Result<Morphism> {
    compose(
        &ptr_self_braiding(v, false, Side::Left)?,
        &ptr_self_braiding(v, true, Side::Left)?,
    )
}

/// (𝔈_V)* ∘ 𝔈_{V*} = Id, i.e. (𝔈_V)* = 𝔈_{V*}^{-1}.
pub fn e_operator_duality_holds(v: &Module) -> Result<bool> {
    let d = dual_mor(&e_operator(v)?);
    let vs = dual_module(v);
    Ok(compose(&d, &e_operator(&vs)?)?.is_identity())
}

/// 𝔈_{V⊗W} = 𝔈_V ⊗ 𝔈_W.
pub fn e_operator_monoidal_holds(v: &Module, w: &Module) -> Result<bool> {
    let vw = tensor_module(v, w)?;
    Ok(e_operator(&vw)? == tensor_mor(&e_operator(v)?, &e_operator(w)?)?)
}

/// f_V = c_{V,V_0} ∘ c_{V_0,V} on V_0 ⊗ V.
pub fn double_braiding_f(v: &Module) -> Result<Morphism> {
    let v0 = simple_nilpotent(&v.params, &Rational::zero());
    compose(&braiding(v, &v0)?, &braiding(&v0, v)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::rat;
    use crate::moncat::{compose_all, hom_basis, ptr_left, ptr_right, tr_right};
    use crate::uqsl2::trivial_module;

    fn v(ell: u64, a: Rational) -> Module {
        simple_nilpotent(&Params::new(ell).unwrap(), &a)
    }

    #[test]
    fn unit_strand() {
        let a = v(5, rat(1, 3));
        let one = trivial_module(&a.params);
        assert!(braiding(&one, &a).unwrap().raw_matrix().is_identity());
        assert!(braiding(&a, &one).unwrap().raw_matrix().is_identity());
        assert!(twist(&one).unwrap().is_identity());
        assert!(e_operator(&one).unwrap().is_identity());
    }

    #[test]
    fn inverse_paths_agree() {
        for ell in 3..=6 {
            let a = v(ell, rat(1, 3));
            let b = v(ell, rat(-2, 5));
            let c = braiding(&a, &b).unwrap();
            let ci = braiding_inverse(&a, &b).unwrap();
            assert!(compose(&ci, &c).unwrap().is_identity(), "ell {ell}");
            assert!(compose(&c, &ci).unwrap().is_identity(), "ell {ell}");
            assert_eq!(ci, braiding_inverse_by_matrix(&a, &b).unwrap());
        }
    }

    #[test]
    fn hexagons() {
        let p = Params::new(3).unwrap();
        let u = simple_nilpotent(&p, &rat(1, 2));
        let x = simple_nilpotent(&p, &rat(1, 5));
        let y = simple_nilpotent(&p, &rat(2, 7));
        let iu = Morphism::identity(&u);
        let ix = Morphism::identity(&x);
        let iy = Morphism::identity(&y);
        let xy = tensor_module(&x, &y).unwrap();
        let lhs = braiding(&u, &xy).unwrap();
        let rhs = compose(
            &tensor_mor(&ix, &braiding(&u, &y).unwrap()).unwrap(),
            &tensor_mor(&braiding(&u, &x).unwrap(), &iy).unwrap(),
        )
        .unwrap();
        assert_eq!(lhs, rhs);
        let xu = tensor_module(&x, &u).unwrap();
        let lhs = braiding(&xu, &y).unwrap();
        let rhs = compose(
            &tensor_mor(&braiding(&x, &y).unwrap(), &iu).unwrap(),
            &tensor_mor(&ix, &braiding(&u, &y).unwrap()).unwrap(),
        )
        .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn naturality() {
        let p = Params::new(3).unwrap();
        let a = simple_nilpotent(&p, &rat(1, 5));
        let b = simple_nilpotent(&p, &rat(1, 7));
        let u = simple_nilpotent(&p, &rat(1, 4));
        let t = tensor_module(&a, &b).unwrap();
        let hb = hom_basis(&t, &t).unwrap();
        let f = hb[0].add(&hb[2].scale(&p.qi(1))).unwrap();
        let iu = Morphism::identity(&u);
        let lhs = compose(&tensor_mor(&iu, &f).unwrap(), &braiding(&t, &u).unwrap()).unwrap();
        let rhs = compose(&braiding(&t, &u).unwrap(), &tensor_mor(&f, &iu).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn top_vector_double_braiding() {
        let p = Params::new(5).unwrap();
        let a = simple_nilpotent(&p, &rat(1, 3));
        let b = simple_nilpotent(&p, &rat(1, 4));
        let cc = compose(&braiding(&b, &a).unwrap(), &braiding(&a, &b).unwrap()).unwrap();
        let want = p.q(&(&a.weights[0] * &b.weights[0]));
        assert_eq!(cc.matrix()[(0, 0)], want);
    }

    #[test]
    fn twists() {
        for ell in 3..=8 {
            let p = Params::new(ell).unwrap();
            for alpha in [rat(1, 3), rat(-3, 4), rat(0, 1)] {
                let a = simple_nilpotent(&p, &alpha);
                let t = twist(&a).unwrap();
                assert_eq!(t, twist_by_matrix(&a).unwrap());
                assert_eq!(t.scalar().unwrap(), twist_closed(&p, &alpha), "ell {ell} alpha {alpha}");
                let ts = twist(&dual_module(&a)).unwrap();
                assert_eq!(dual_mor(&t), ts);
            }
        }
    }

    #[test]
    fn structured_partial_traces() {
        let p = Params::new(4).unwrap();
        let a = simple_nilpotent(&p, &rat(2, 5));
        let c = braiding(&a, &a).unwrap();
        let ci = braiding_inverse(&a, &a).unwrap();
        assert_eq!(ptr_self_braiding(&a, true, Side::Right).unwrap(), ptr_right(&c, &a, &a).unwrap());
        assert_eq!(ptr_self_braiding(&a, true, Side::Left).unwrap(), ptr_left(&c, &a, &a).unwrap());
        assert_eq!(ptr_self_braiding(&a, false, Side::Right).unwrap(), ptr_right(&ci, &a, &a).unwrap());
        assert_eq!(ptr_self_braiding(&a, false, Side::Left).unwrap(), ptr_left(&ci, &a, &a).unwrap());
    }

    #[test]
    fn e_operator_identity() {
        for ell in [3, 4] {
            let p = Params::new(ell).unwrap();
            let a = simple_nilpotent(&p, &rat(1, 5));
            let b = simple_nilpotent(&p, &rat(1, 7));
            assert!(e_operator(&a).unwrap().is_identity());
            assert!(e_operator_left(&a).unwrap().is_identity());
            let t = tensor_module(&a, &b).unwrap();
            assert!(e_operator(&t).unwrap().is_identity());
            assert!(e_operator_duality_holds(&a).unwrap());
            assert!(e_operator_monoidal_holds(&a, &b).unwrap());
        }
    }

    #[test]
    fn double_braiding() {
        for ell in 3..=6 {
            let p = Params::new(ell).unwrap();
            let r = p.r as i64;
            let a = simple_nilpotent(&p, &rat(1, 3));
            let v0 = simple_nilpotent(&p, &Rational::zero());
            let f = double_braiding_f(&a).unwrap();
            let pr = ptr_right(&f, &v0, &a).unwrap();
            assert_eq!(pr.scalar().unwrap(), CycNumber::from_int(r));
            let pl = ptr_left(&f, &v0, &a).unwrap();
            assert!(pl.scalar().is_some());
            let one = trivial_module(&p);
            assert!(double_braiding_f(&one).unwrap().is_identity());
        }
    }

    #[test]
    fn balanced() {
        let p = Params::new(3).unwrap();
        let a = simple_nilpotent(&p, &rat(1, 5));
        let b = simple_nilpotent(&p, &rat(1, 2));
        let t = tensor_module(&a, &b).unwrap();
        let lhs = twist(&t).unwrap();
        let rhs = compose_all(&[
            &tensor_mor(&twist(&a).unwrap(), &twist(&b).unwrap()).unwrap(),
            &braiding(&b, &a).unwrap(),
            &braiding(&a, &b).unwrap(),
        ])
        .unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(tr_right(&lhs).unwrap(), tr_right(&rhs).unwrap());
    }
}
