//! Unrolled quantum sl(2) at q = exp(2 pi i / ell) and its weight modules.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::cyclo::{fmt_rational, parse_rational, q_power, quantum_integer, root_of_unity, CycNumber, Rational};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::moncat::Morphism;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    pub ell: u64,
    pub r: u64,
    pub xi: CycNumber,
}

impl Params {
    pub fn new(ell: u64) -> Result<Params> {
        if ell < 2 {
            return Err(Error::InvalidParams(format!("ell must be at least 2, got {ell}")));
        }
        let r = if ell % 2 == 1 { ell } else { ell / 2 };
        Ok(Params {
            ell,
            r,
            xi: root_of_unity(ell, 1),
        })
    }

    /// q^x.
    pub fn q(&self, x: &Rational) -> CycNumber {
        q_power(self.ell, x)
    }

    pub fn qi(&self, k: i64) -> CycNumber {
        root_of_unity(self.ell, k)
    }

    /// [x] = q^x - q^{-x}.
    pub fn qint(&self, x: &Rational) -> CycNumber {
        quantum_integer(self.ell, x)
    }

    /// [1] = q - q^{-1}.
    pub fn bracket1(&self) -> CycNumber {
        &self.qi(1) - &self.qi(-1)
    }

    /// False at ell = 2, where q - q^{-1} vanishes.
    pub fn is_nondegenerate(&self) -> bool {
        !self.bracket1().is_zero()
    }

    pub fn sign_ell(&self) -> i64 {
        if self.ell.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// Genericity of V_alpha: alpha in r Z, or the grading K^r is not +-1.
pub fn is_generic_param(p: &Params, alpha: &Rational) -> bool {
    let r = Rational::from_integer(p.r.into());
    if (alpha / &r).is_integer() {
        return true;
    }
    is_regular_param(p, alpha)
}

/// K^r on V_alpha is q^{r(alpha + r - 1)}; regular when it is not +-1.
pub fn is_regular_param(p: &Params, alpha: &Rational) -> bool {
    let r = Rational::from_integer(p.r.into());
    let w = alpha + &r - Rational::one();
    let x = Rational::from_integer((2 * p.r).into()) * w / Rational::from_integer(p.ell.into());
    !x.is_integer()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleDescriptor {
    Nilpotent(Rational),
    Trivial,
    Dual(Box<ModuleDescriptor>),
    Tensor(Box<ModuleDescriptor>, Box<ModuleDescriptor>),
}

impl ModuleDescriptor {
    pub fn build(&self, p: &Params) -> Result<Arc<WeightModule>> {
        Ok(match self {
            ModuleDescriptor::Nilpotent(a) => simple_nilpotent(p, a),
            ModuleDescriptor::Trivial => trivial_module(p),
            ModuleDescriptor::Dual(m) => dual_module(&*m.build(p)?),
            ModuleDescriptor::Tensor(a, b) => tensor_module(&*a.build(p)?, &*b.build(p)?)?,
        })
    }

    fn json_body(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            ModuleDescriptor::Nilpotent(a) => json!({"kind": "nilpotent", "alpha": fmt_rational(a)}),
            ModuleDescriptor::Trivial => json!({"kind": "trivial"}),
            ModuleDescriptor::Dual(m) => json!({"kind": "dual", "of": m.json_body()}),
            ModuleDescriptor::Tensor(a, b) => {
                json!({"kind": "tensor", "left": a.json_body(), "right": b.json_body()})
            }
        }
    }

    pub fn to_json(&self, ell: u64) -> serde_json::Value {
        let mut v = self.json_body();
        v.as_object_mut().unwrap().insert("ell".into(), ell.into());
        v
    }

    pub fn from_json(v: &serde_json::Value) -> Result<ModuleDescriptor> {
        let bad = |m: &str| Error::Parse(format!("module descriptor: {m}"));
        let kind = v.get("kind").and_then(|k| k.as_str()).ok_or_else(|| bad("missing kind"))?;
        Ok(match kind {
            "nilpotent" => {
                let a = v.get("alpha").and_then(|a| a.as_str()).ok_or_else(|| bad("missing alpha"))?;
                ModuleDescriptor::Nilpotent(parse_rational(a)?)
            }
            "trivial" => ModuleDescriptor::Trivial,
            "dual" => ModuleDescriptor::Dual(Box::new(Self::from_json(
                v.get("of").ok_or_else(|| bad("missing of"))?,
            )?)),
            "tensor" => ModuleDescriptor::Tensor(
                Box::new(Self::from_json(v.get("left").ok_or_else(|| bad("missing left"))?)?),
                Box::new(Self::from_json(v.get("right").ok_or_else(|| bad("missing right"))?)?),
            ),
            other => return Err(bad(&format!("unknown kind {other}"))),
        })
    }
}

impl fmt::Display for ModuleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleDescriptor::Nilpotent(a) => write!(f, "V({})", fmt_rational(a)),
            ModuleDescriptor::Trivial => write!(f, "1"),
            ModuleDescriptor::Dual(m) => write!(f, "dual({m})"),
            ModuleDescriptor::Tensor(a, b) => write!(f, "({a} x {b})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeightModule {
    pub params: Params,
    pub dim: usize,
    pub weights: Vec<Rational>,
    pub e: Matrix,
    pub f: Matrix,
    pub k: Matrix,
    pub kinv: Matrix,
    pub h: Matrix,
    pub descriptor: ModuleDescriptor,
    /// Only meaningful for nilpotent simples.
    pub generic: bool,
}

impl WeightModule {
    pub fn label(&self) -> String {
        self.descriptor.to_string()
    }

    /// Structural equality of the module data (labels ignored).
    pub fn same_as(&self, o: &WeightModule) -> bool {
        self.params == o.params
            && self.dim == o.dim
            && self.weights == o.weights
            && self.e == o.e
            && self.f == o.f
    }

    /// A rational s with every weight in s + 2Z, if one exists.
    pub fn weight_coset(&self) -> Option<Rational> {
        let s = self.weights.first()?.clone();
        let two = Rational::from_integer(2.into());
        self.weights
            .iter()
            .all(|w| ((w - &s) / &two).is_integer())
            .then_some(s)
    }

    /// Indices of basis vectors grouped by weight, weights descending.
    pub fn weight_spaces(&self) -> Vec<(Rational, Vec<usize>)> {
        let mut ws: Vec<(Rational, Vec<usize>)> = Vec::new();
        for (i, w) in self.weights.iter().enumerate() {
            match ws.iter_mut().find(|(x, _)| x == w) {
                Some((_, v)) => v.push(i),
                None => ws.push((w.clone(), vec![i])),
            }
        }
        ws.sort_by(|a, b| b.0.cmp(&a.0));
        ws
    }

    /// The pivot K^{1-r} as its diagonal.
    pub fn pivot_diag(&self) -> Vec<CycNumber> {
        let e = Rational::from_integer((1 - self.params.r as i64).into());
        self.weights.iter().map(|w| self.params.q(&(&e * w))).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.descriptor.to_json(self.params.ell)
    }
}

fn diag_q(p: &Params, weights: &[Rational], sign: i64) -> Matrix {
    let s = Rational::from_integer(sign.into());
    Matrix::diag(weights.iter().map(|w| p.q(&(&s * w))).collect())
}

/// The r-dimensional nilpotent module with highest weight alpha + r - 1.
/// Basis v_0..v_{r-1}; F v_i = v_{i+1}, E v_i = [i][alpha + r - i] / [1]^2 v_{i-1}.
pub fn simple_nilpotent(p: &Params, alpha: &Rational) -> Arc<WeightModule> {
    let r = p.r as usize;
    let top = alpha + Rational::from_integer((r as i64 - 1).into());
    let weights: Vec<Rational> = (0..r)
        .map(|i| &top - Rational::from_integer((2 * i as i64).into()))
        .collect();
    let mut e = Matrix::zeros(r, r);
    let mut f = Matrix::zeros(r, r);
    if r > 1 {
        let b1 = p.bracket1();
        let b1sq_inv = (&b1 * &b1).inv().expect("[1] is nonzero for r > 1");
        for i in 1..r {
            let ii = Rational::from_integer((i as i64).into());
            let a = &(&p.qint(&ii) * &p.qint(&(alpha + Rational::from_integer(((r - i) as i64).into())))) * &b1sq_inv;
            e[(i - 1, i)] = a;
            f[(i, i - 1)] = CycNumber::one();
        }
    }
    Arc::new(WeightModule {
        params: p.clone(),
        dim: r,
        k: diag_q(p, &weights, 1),
        kinv: diag_q(p, &weights, -1),
        h: Matrix::diag(weights.iter().map(CycNumber::from_rational).collect()),
        weights,
        e,
        f,
        descriptor: ModuleDescriptor::Nilpotent(alpha.clone()),
        generic: is_generic_param(p, alpha),
    })
}

/// The unit object.
pub fn trivial_module(p: &Params) -> Arc<WeightModule> {
    Arc::new(WeightModule {
        params: p.clone(),
        dim: 1,
        weights: vec![Rational::zero()],
        e: Matrix::zeros(1, 1),
        f: Matrix::zeros(1, 1),
        k: Matrix::identity(1),
        kinv: Matrix::identity(1),
        h: Matrix::zeros(1, 1),
        descriptor: ModuleDescriptor::Trivial,
        generic: true,
    })
}

/// Dual through the antipode: S(E) = -E K^{-1}, S(F) = -K F, S(K) = K^{-1}, S(H) = -H.
pub fn dual_module(m: &WeightModule) -> Arc<WeightModule> {
    Arc::new(WeightModule {
        params: m.params.clone(),
        dim: m.dim,
        weights: m.weights.iter().map(|w| -w).collect(),
        e: m.e.mul(&m.kinv).transpose().neg(),
        f: m.k.mul(&m.f).transpose().neg(),
        k: m.kinv.transpose(),
        kinv: m.k.transpose(),
        h: m.h.transpose().neg(),
        descriptor: ModuleDescriptor::Dual(Box::new(m.descriptor.clone())),
        generic: m.generic,
    })
}

/// Tensor product via Delta(E) = 1 x E + E x K, Delta(F) = K^{-1} x F + F x 1.
pub fn tensor_module(a: &WeightModule, b: &WeightModule) -> Result<Arc<WeightModule>> {
    if a.params != b.params {
        return Err(Error::ParamsMismatch);
    }
    let ia = Matrix::identity(a.dim);
    let ib = Matrix::identity(b.dim);
    let weights = a
        .weights
        .iter()
        .flat_map(|x| b.weights.iter().map(move |y| x + y))
        .collect();
    Ok(Arc::new(WeightModule {
        params: a.params.clone(),
        dim: a.dim * b.dim,
        weights,
        e: ia.kron(&b.e).add(&a.e.kron(&b.k)),
        f: a.kinv.kron(&b.f).add(&a.f.kron(&ib)),
        k: a.k.kron(&b.k),
        kinv: a.kinv.kron(&b.kinv),
        h: a.h.kron(&ib).add(&ia.kron(&b.h)),
        descriptor: ModuleDescriptor::Tensor(Box::new(a.descriptor.clone()), Box::new(b.descriptor.clone())),
        generic: a.generic && b.generic,
    }))
}

/// Every defining relation as an exact matrix identity.
pub fn check_relations(m: &WeightModule) -> bool {
    let p = &m.params;
    let q = p.qi(1);
    let q2 = p.qi(2);
    let n = m.dim;
    let shapes = [&m.e, &m.f, &m.k, &m.kinv, &m.h]
        .iter()
        .all(|x| x.rows() == n && x.cols() == n);
    if !shapes || m.weights.len() != n {
        return false;
    }
    let h_ok = m.h == Matrix::diag(m.weights.iter().map(CycNumber::from_rational).collect());
    let k_ok = m.k == diag_q(p, &m.weights, 1);
    let kinv_ok = m.k.mul(&m.kinv).is_identity();
    let ke = m.k.mul(&m.e) == m.e.mul(&m.k).scale(&q2);
    let fk = m.f.mul(&m.k) == m.k.mul(&m.f).scale(&q2);
    let ef = m.e.mul(&m.f).sub(&m.f.mul(&m.e)).scale(&(&q - &p.qi(-1))) == m.k.sub(&m.kinv);
    let two = CycNumber::from_int(2);
    let he = m.h.mul(&m.e).sub(&m.e.mul(&m.h)) == m.e.scale(&two);
    let hf = m.h.mul(&m.f).sub(&m.f.mul(&m.h)) == m.f.scale(&two).neg();
    p.is_nondegenerate() && h_ok && k_ok && kinv_ok && ke && fk && ef && he && hf
}

/// [1]^2 E F + K q^{-1} + K^{-1} q.
pub fn casimir_matrix(m: &WeightModule) -> Matrix {
    let p = &m.params;
    let b1 = p.bracket1();
    m.e.mul(&m.f)
        .scale(&(&b1 * &b1))
        .add(&m.k.scale(&p.qi(-1)))
        .add(&m.kinv.scale(&p.qi(1)))
}

/// [1]^2 F E + K q + K^{-1} q^{-1}.
pub fn casimir_matrix_fe(m: &WeightModule) -> Matrix {
    let p = &m.params;
    let b1 = p.bracket1();
    m.f.mul(&m.e)
        .scale(&(&b1 * &b1))
        .add(&m.k.scale(&p.qi(1)))
        .add(&m.kinv.scale(&p.qi(-1)))
}

pub fn casimir_action(m: &Arc<WeightModule>) -> Morphism {
    Morphism::new_unchecked(m.clone(), m.clone(), casimir_matrix(m))
}

/// Scalar of the Casimir on the highest weight vector of weight w: q^{w+1} + q^{-w-1}.
pub fn casimir_on_highest(p: &Params, w: &Rational) -> CycNumber {
    let x = w + Rational::one();
    &p.q(&x) + &p.q(&-x)
}

/// Coefficients of the renormalized Chebyshev polynomial C_n, low degree first.
pub fn chebyshev_poly(n: u64) -> Vec<i64> {
    let mut c0 = vec![2i64];
    let mut c1 = vec![0i64, 1];
    if n == 0 {
        return c0;
    }
    for _ in 1..n {
        let mut next = vec![0i64; c1.len() + 1];
        for (i, &c) in c1.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, &c) in c0.iter().enumerate() {
            next[i] -= c;
        }
        c0 = c1;
        c1 = next;
    }
    c1
}

/// C_r(Omega) = [1]^{2r} E^r F^r - (-1)^ell (K^r + K^{-r}).
pub fn chebyshev_check(m: &WeightModule) -> bool {
    let p = &m.params;
    let r = p.r as u32;
    let omega = casimir_matrix(m);
    let coeffs = chebyshev_poly(p.r);
    let mut lhs = Matrix::zeros(m.dim, m.dim);
    for &c in coeffs.iter().rev() {
        lhs = lhs.mul(&omega).add(&Matrix::scalar(m.dim, &CycNumber::from_int(c)));
    }
    let b1 = p.bracket1();
    let b2r = (&b1 * &b1).pow(r as i64).unwrap();
    let rhs = m
        .e
        .pow(r)
        .mul(&m.f.pow(r))
        .scale(&b2r)
        .sub(&m.k.pow(r).add(&m.kinv.pow(r)).scale(&CycNumber::from_int(p.sign_ell())));
    lhs == rhs
}

/// M(kappa, eps, phi) in the group of characters of the central subalgebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingElement {
    pub kappa: CycNumber,
    pub eps: CycNumber,
    pub phi: CycNumber,
}

impl GradingElement {
    pub fn new(kappa: CycNumber, eps: CycNumber, phi: CycNumber) -> Result<Self> {
        if kappa.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(GradingElement { kappa, eps, phi })
    }

    pub fn multiply(&self, o: &GradingElement) -> GradingElement {
        GradingElement {
            kappa: &self.kappa * &o.kappa,
            eps: &o.eps + &(&self.eps * &o.kappa),
            phi: &(&self.phi * &o.kappa) + &o.phi,
        }
    }

    pub fn inverse(&self) -> GradingElement {
        let ki = self.kappa.inv().expect("kappa is invertible");
        GradingElement {
            eps: -&(&self.eps * &ki),
            phi: -&(&self.phi * &ki),
            kappa: ki,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.eps.is_zero() && self.phi.is_zero()
    }

    pub fn is_regular(&self) -> bool {
        let one = CycNumber::one();
        self.is_diagonal() && self.kappa != one && self.kappa != -&one
    }

    /// kappa + 1/kappa - eps phi / kappa = +-2.
    pub fn is_singular(&self) -> bool {
        let ki = self.kappa.inv().expect("kappa is invertible");
        let t = &(&self.kappa + &ki) - &(&(&self.eps * &self.phi) * &ki);
        let two = CycNumber::from_int(2);
        t == two || t == -&two
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kappa": self.kappa.to_json(),
            "eps": self.eps.to_json(),
            "phi": self.phi.to_json(),
        })
    }
}

pub fn grading_of(m: &WeightModule) -> Result<GradingElement> {
    let p = &m.params;
    let r = p.r as u32;
    let kr = m.k.pow(r).scalar_value().ok_or(Error::NonScalarCentralAction("K^r"))?;
    let er = m.e.pow(r).scalar_value().ok_or(Error::NonScalarCentralAction("E^r"))?;
    let fr = m.f.pow(r).scalar_value().ok_or(Error::NonScalarCentralAction("F^r"))?;
    let b1r = p.bracket1().pow(r as i64).unwrap();
    let eps = &b1r * &er;
    let phi = &(&(&b1r * &fr) * &kr) * &CycNumber::from_int(p.sign_ell());
    GradingElement::new(kr, eps, phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::rat;

    #[test]
    fn params() {
        let rs: Vec<u64> = (2..=8).map(|l| Params::new(l).unwrap().r).collect();
        assert_eq!(rs, vec![1, 3, 2, 5, 3, 7, 4]);
        assert!(Params::new(1).is_err());
        assert!(!Params::new(2).unwrap().is_nondegenerate());
    }

    #[test]
    fn nilpotent_basics() {
        let p = Params::new(4).unwrap();
        let v = simple_nilpotent(&p, &rat(1, 2));
        assert_eq!(v.weights, vec![rat(3, 2), rat(-1, 2)]);
        assert!(check_relations(&v));
        let p5 = Params::new(5).unwrap();
        let v0 = simple_nilpotent(&p5, &Rational::zero());
        assert_eq!(v0.weights[0], rat(4, 1));
        assert!(v0.generic);
        assert!(check_relations(&simple_nilpotent(&p5, &rat(1, 3))));
        // half-integers are not regular at odd ell
        assert!(!simple_nilpotent(&p5, &rat(1, 2)).generic);
        assert!(!simple_nilpotent(&p5, &rat(2, 1)).generic);
    }

    #[test]
    fn zeroed_e_breaks_relations() {
        let p = Params::new(5).unwrap();
        let mut v = (*simple_nilpotent(&p, &rat(1, 3))).clone();
        v.e = Matrix::zeros(5, 5);
        assert!(!check_relations(&v));
    }

    #[test]
    fn duals_and_tensors() {
        let p = Params::new(3).unwrap();
        let a = simple_nilpotent(&p, &rat(1, 4));
        let b = simple_nilpotent(&p, &rat(2, 5));
        let d = dual_module(&a);
        assert!(check_relations(&d));
        let t = tensor_module(&a, &d).unwrap();
        assert!(check_relations(&t));
        assert_eq!(tensor_module(&a, &b).unwrap().dim, 9);
        let one = trivial_module(&p);
        assert!(tensor_module(&a, &one).unwrap().same_as(&a));
        let q = Params::new(4).unwrap();
        assert_eq!(
            tensor_module(&a, &simple_nilpotent(&q, &rat(1, 3))).unwrap_err(),
            Error::ParamsMismatch
        );
    }

    #[test]
    fn casimir_and_chebyshev() {
        assert_eq!(chebyshev_poly(2), vec![-2, 0, 1]);
        assert_eq!(chebyshev_poly(3), vec![0, -3, 0, 1]);
        let p = Params::new(5).unwrap();
        let v = simple_nilpotent(&p, &rat(1, 3));
        assert_eq!(casimir_matrix(&v), casimir_matrix_fe(&v));
        assert!(chebyshev_check(&v));
        let one = trivial_module(&p);
        let w = casimir_matrix(&one).scalar_value().unwrap();
        assert_eq!(w, &p.qi(1) + &p.qi(-1));
    }

    #[test]
    fn gradings() {
        let g = |k, e, f| {
            GradingElement::new(CycNumber::from_int(k), CycNumber::from_int(e), CycNumber::from_int(f)).unwrap()
        };
        assert_eq!(g(2, 0, 0).multiply(&g(3, 1, 1)), g(6, 1, 1));
        assert!(g(1, 0, 0).is_singular());
        assert!(g(2, 0, 0).is_regular() && !g(2, 0, 0).is_singular());
        let p = Params::new(5).unwrap();
        let a = rat(1, 3);
        let v = simple_nilpotent(&p, &a);
        let gv = grading_of(&v).unwrap();
        assert!(gv.is_diagonal());
        assert_eq!(gv.kappa, p.q(&(rat(5, 1) * (&a + rat(4, 1)))));
    }
}
