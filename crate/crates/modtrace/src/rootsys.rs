//! Root systems of simple Lie algebras from symmetrized Cartan data.

use num_traits::{One, Zero};

use crate::cyclo::{fmt_rational, q_power, quantum_integer, CycNumber, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    SimpleRoot,
    Fundamental,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub kind: char,
    pub rank: usize,
    /// a_ij = 2 (a_i, a_j) / (a_i, a_i)
    pub cartan: Vec<Vec<i64>>,
    pub symmetrizer: Vec<i64>,
    /// B = D A, the Gram matrix of the simple roots
    pub gram: Vec<Vec<i64>>,
    /// simple-root coordinates, ordered by height then reverse lexicographic
    pub positive_roots: Vec<Vec<i64>>,
    /// rho in simple-root coordinates
    pub rho: Vec<Rational>,
    cartan_inv: Vec<Vec<Rational>>,
}

fn gram_matrix(kind: char, n: usize) -> Result<Vec<Vec<i64>>> {
    let bad = || Error::UnsupportedType(format!("{kind}{n}"));
    let mut b = vec![vec![0i64; n]; n];
    let link = |b: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
        b[i][j] = v;
        b[j][i] = v;
    };
    match kind {
        'A' if n >= 1 => {
            for i in 0..n {
                b[i][i] = 2;
                if i + 1 < n {
                    link(&mut b, i, i + 1, -1);
                }
            }
        }
        'B' if n >= 2 => {
            for i in 0..n {
                b[i][i] = if i + 1 == n { 2 } else { 4 };
                if i + 1 < n {
                    link(&mut b, i, i + 1, -2);
                }
            }
        }
        'C' if n >= 2 => {
            for i in 0..n {
                b[i][i] = if i + 1 == n { 4 } else { 2 };
                if i + 1 < n {
                    link(&mut b, i, i + 1, if i + 2 == n { -2 } else { -1 });
                }
            }
        }
        'D' if n >= 4 => {
            for i in 0..n {
                b[i][i] = 2;
            }
            for i in 0..n - 2 {
                link(&mut b, i, i + 1, -1);
            }
            link(&mut b, n - 3, n - 1, -1);
        }
        'E' if (6..=8).contains(&n) => {
            for i in 0..n {
                b[i][i] = 2;
            }
            // Bourbaki labels: 1-3-4-5-6-7-8 with 2 attached to 4
            link(&mut b, 0, 2, -1);
            link(&mut b, 1, 3, -1);
            for i in 2..n - 1 {
                link(&mut b, i, i + 1, -1);
            }
        }
        'F' if n == 4 => {
            let d = [4, 4, 2, 2];
            for i in 0..4 {
                b[i][i] = d[i];
            }
            link(&mut b, 0, 1, -2);
            link(&mut b, 1, 2, -2);
            link(&mut b, 2, 3, -1);
        }
        'G' if n == 2 => {
            b = vec![vec![2, -3], vec![-3, 6]];
        }
        _ => return Err(bad()),
    }
    Ok(b)
}

fn rational_inverse(a: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational> = row.iter().map(|&x| Rational::from_integer(x.into())).collect();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero()).expect("Cartan matrix is invertible");
        m.swap(c, p);
        let inv = Rational::one() / &m[c][c];
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..2 * n {
                    let t = &f * &m[c][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn build_root_system(kind: char, rank: usize) -> Result<RootSystem> {
    let kind = kind.to_ascii_uppercase();
    let gram = gram_matrix(kind, rank)?;
    let n = rank;
    let symmetrizer: Vec<i64> = (0..n).map(|i| gram[i][i] / 2).collect();
    let cartan: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| gram[i][j] / symmetrizer[i]).collect())
        .collect();

    // closure by root strings, one height at a time
    let mut roots: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut layer = roots.clone();
    while !layer.is_empty() {
        let mut next: Vec<Vec<i64>> = Vec::new();
        for beta in &layer {
            for i in 0..n {
                // <beta, a_i^vee>
                let pairing: i64 = (0..n).map(|j| cartan[i][j] * beta[j]).sum();
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if roots.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let q = p - pairing;
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        roots.extend(next.iter().cloned());
        layer = next;
    }
    roots.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    let mut rho = vec![Rational::zero(); n];
    for r in &roots {
        for j in 0..n {
            rho[j] += Rational::new(r[j].into(), 2.into());
        }
    }
    let cartan_inv = rational_inverse(&cartan);
    Ok(RootSystem {
        kind,
        rank,
        cartan,
        symmetrizer,
        gram,
        positive_roots: roots,
        rho,
        cartan_inv,
    })
}

impl RootSystem {
    pub fn num_positive(&self) -> usize {
        self.positive_roots.len()
    }

    /// Fundamental-weight coordinates to simple-root coordinates.
    pub fn to_simple(&self, m: &[Rational]) -> Vec<Rational> {
        (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .map(|j| &self.cartan_inv[i][j] * &m[j])
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// Simple-root coordinates to fundamental-weight coordinates.
    pub fn to_fundamental(&self, c: &[Rational]) -> Vec<Rational> {
        (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .map(|j| Rational::from_integer(self.cartan[i][j].into()) * &c[j])
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .collect()
    }

    pub fn inner(&self, mu: &[Rational], nu: &[Rational], basis: Basis) -> Result<Rational> {
        for v in [mu, nu] {
            if v.len() != self.rank {
                return Err(Error::DimensionMismatch {
                    expected: self.rank,
                    found: v.len(),
                });
            }
        }
        let (a, b) = match basis {
            Basis::SimpleRoot => (mu.to_vec(), nu.to_vec()),
            Basis::Fundamental => (self.to_simple(mu), self.to_simple(nu)),
        };
        let mut s = Rational::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                if self.gram[i][j] != 0 {
                    s += &a[i] * &b[j] * Rational::from_integer(self.gram[i][j].into());
                }
            }
        }
        Ok(s)
    }

    fn root_as_rational(&self, k: usize) -> Vec<Rational> {
        self.positive_roots[k]
            .iter()
            .map(|&x| Rational::from_integer(x.into()))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "type": self.kind.to_string(),
            "rank": self.rank,
            "cartan": self.cartan,
            "symmetrizer": self.symmetrizer,
            "positive_roots": self.positive_roots,
            "rho": self.rho.iter().map(fmt_rational).collect::<Vec<_>>(),
        })
    }
}

/// d(V_0) r^N prod_{a > 0} [<mu, a>] / [r <mu, a>], mu in fundamental coordinates.
pub fn general_modified_dimension(
    rs: &RootSystem,
    ell: u64,
    mu: &[Rational],
    d0: &CycNumber,
) -> Result<CycNumber> {
    if ell.is_multiple_of(2) {
        return Err(Error::EvenEllUnsupported(ell));
    }
    if ell < 3 {
        return Err(Error::InvalidParams(format!("ell = {ell}")));
    }
    if mu.len() != rs.rank {
        return Err(Error::DimensionMismatch {
            expected: rs.rank,
            found: mu.len(),
        });
    }
    let r = Rational::from_integer(ell.into());
    let c = rs.to_simple(mu);
    let mut num = d0.clone();
    let mut den = CycNumber::one();
    for k in 0..rs.num_positive() {
        let x = rs.inner(&c, &rs.root_as_rational(k), Basis::SimpleRoot)?;
        let rx = &r * &x;
        let d = quantum_integer(ell, &rx);
        if d.is_zero() {
            return Err(Error::SingularWeight(fmt_rational(&rx)));
        }
        num = &num * &(&quantum_integer(ell, &x) * &CycNumber::from_int(ell as i64));
        den = &den * &d;
    }
    num.div(&den)
}

/// q^{<lambda, lambda> - (r-1)^2 <rho, rho>}, lambda in fundamental coordinates.
pub fn twist_scalar(rs: &RootSystem, ell: u64, lambda: &[Rational]) -> Result<CycNumber> {
    if ell < 2 {
        return Err(Error::InvalidParams(format!("ell = {ell}")));
    }
    let r = if ell % 2 == 1 { ell } else { ell / 2 };
    let ll = rs.inner(lambda, lambda, Basis::Fundamental)?;
    let rr = rs.inner(&rs.rho, &rs.rho, Basis::SimpleRoot)?;
    let s = Rational::from_integer(((r - 1) * (r - 1)).into());
    Ok(q_power(ell, &(ll - s * rr)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::rat;

    #[test]
    fn classical_counts() {
        let cases = [
            ('A', 1, 1),
            ('A', 2, 3),
            ('A', 4, 10),
            ('B', 2, 4),
            ('B', 3, 9),
            ('C', 3, 9),
            ('D', 4, 12),
            ('D', 5, 20),
            ('E', 6, 36),
            ('E', 7, 63),
            ('E', 8, 120),
            ('F', 4, 24),
            ('G', 2, 6),
        ];
        for (k, n, np) in cases {
            let rs = build_root_system(k, n).unwrap();
            assert_eq!(rs.num_positive(), np, "{k}{n}");
        }
    }

    #[test]
    fn a2_and_g2_data() {
        let a2 = build_root_system('A', 2).unwrap();
        assert_eq!(a2.positive_roots, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        let g2 = build_root_system('G', 2).unwrap();
        assert_eq!(g2.symmetrizer, vec![1, 3]);
        assert_eq!(g2.cartan, vec![vec![2, -3], vec![-1, 2]]);
        assert!(matches!(build_root_system('A', 0), Err(Error::UnsupportedType(_))));
        assert!(matches!(build_root_system('G', 3), Err(Error::UnsupportedType(_))));
    }

    #[test]
    fn rho_is_sum_of_fundamentals() {
        for (k, n) in [('A', 3), ('B', 3), ('C', 4), ('D', 4), ('E', 6), ('F', 4), ('G', 2)] {
            let rs = build_root_system(k, n).unwrap();
            let f = rs.to_fundamental(&rs.rho);
            assert!(f.iter().all(|x| x == &Rational::one()), "{k}{n}");
        }
    }

    #[test]
    fn inner_products() {
        let a1 = build_root_system('A', 1).unwrap();
        assert_eq!(a1.inner(&[rat(1, 1)], &[rat(1, 1)], Basis::SimpleRoot).unwrap(), rat(2, 1));
        assert_eq!(a1.inner(&a1.rho, &a1.rho, Basis::SimpleRoot).unwrap(), rat(1, 2));
        let a2 = build_root_system('A', 2).unwrap();
        // oracle: sum over pairs of positive roots of <a, b> / 4
        let mut s = Rational::zero();
        for a in &a2.positive_roots {
            for b in &a2.positive_roots {
                let ar: Vec<Rational> = a.iter().map(|&x| rat(x, 1)).collect();
                let br: Vec<Rational> = b.iter().map(|&x| rat(x, 1)).collect();
                s += a2.inner(&ar, &br, Basis::SimpleRoot).unwrap() / rat(4, 1);
            }
        }
        assert_eq!(s, rat(2, 1));
        assert_eq!(a2.inner(&a2.rho, &a2.rho, Basis::SimpleRoot).unwrap(), rat(2, 1));
        assert!(matches!(
            a2.inner(&[rat(1, 1)], &a2.rho, Basis::SimpleRoot),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn a1_dimension() {
        let a1 = build_root_system('A', 1).unwrap();
        let x = rat(1, 3);
        let d = general_modified_dimension(&a1, 5, std::slice::from_ref(&x), &CycNumber::one()).unwrap();
        let want = (&CycNumber::from_int(5) * &quantum_integer(5, &x))
            .div(&quantum_integer(5, &(rat(5, 1) * &x)))
            .unwrap();
        assert_eq!(d, want);
        assert!(matches!(
            general_modified_dimension(&a1, 5, &[Rational::zero()], &CycNumber::one()),
            Err(Error::SingularWeight(_))
        ));
        // [5/2] = 0 at ell = 5
        assert!(matches!(
            general_modified_dimension(&a1, 5, &[rat(1, 2)], &CycNumber::one()),
            Err(Error::SingularWeight(_))
        ));
        assert!(matches!(
            general_modified_dimension(&a1, 4, &[x], &CycNumber::one()),
            Err(Error::EvenEllUnsupported(4))
        ));
    }

    #[test]
    fn twist_values() {
        let a1 = build_root_system('A', 1).unwrap();
        let t = twist_scalar(&a1, 5, &[rat(4, 1)]).unwrap();
        assert!(t.is_one());
        let t = twist_scalar(&a1, 5, &[rat(1, 3)]).unwrap();
        assert_eq!(t, q_power(5, &(rat(1, 18) - rat(8, 1))));
        let a2 = build_root_system('A', 2).unwrap();
        let l = [rat(1, 3), rat(-2, 5)];
        let nl = [rat(-1, 3), rat(2, 5)];
        assert_eq!(twist_scalar(&a2, 7, &l).unwrap(), twist_scalar(&a2, 7, &nl).unwrap());
    }
}
