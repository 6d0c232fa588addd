use super::{Gen, Slice, Strand, TangleDiagram};
use crate::error::{Error, Result};

/// Local rewrites that preserve the framed isotopy class.
///
/// A level is the row of strands below slice `level` (or the top when
/// `level` equals the number of slices). Positions are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    /// Insert a crossing and its inverse on strands `pos`, `pos + 1`.
    R2Insert { level: usize, pos: usize, positive_first: bool },
    /// Remove slices `slice` and `slice + 1` when they are mutually inverse crossings.
    R2Delete { slice: usize },
    /// Rewrite three same-sign crossings σ1σ2σ1 <-> σ2σ1σ2 starting at `slice`.
    R3Slide { slice: usize },
    /// Insert a positive and a negative kink on an upward strand.
    FramedR1InsertPair { level: usize, pos: usize },
    /// Move the cut of a two-strand closure from one strand to the other.
    RotateCut,
    /// Planar isotopy: split slice `slice` after generator `at`.
    SplitSlice { slice: usize, at: usize },
}

fn na<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::MoveNotApplicable(msg.into()))
}

fn ids(strands: &[Strand]) -> Vec<Gen> {
    strands.iter().map(|s| Gen::Id(s.clone())).collect()
}

/// Identity on all strands except a generator acting at `pos`.
fn around(strands: &[Strand], pos: usize, g: Gen) -> Slice {
    let width = g.inputs().len();
    let mut gens = ids(&strands[..pos]);
    gens.push(g);
    gens.extend(ids(&strands[pos + width..]));
    Slice { gens }
}

/// (position, positive, left strand, right strand) of a slice made of
/// identities and exactly one crossing.
fn single_crossing(s: &Slice) -> Option<(usize, bool, Strand, Strand)> {
    let mut found = None;
    for (i, g) in s.gens.iter().enumerate() {
        match g {
            Gen::Id(_) => {}
            Gen::Xp(a, b) | Gen::Xn(a, b) if found.is_none() => {
                found = Some((i, matches!(g, Gen::Xp(..)), a.clone(), b.clone()));
            }
            _ => return None,
        }
    }
    found
}

fn cross(positive: bool, a: &Strand, b: &Strand) -> Gen {
    if positive {
        Gen::Xp(a.clone(), b.clone())
    } else {
        Gen::Xn(a.clone(), b.clone())
    }
}

pub fn apply_move(d: &TangleDiagram, mv: &Move) -> Result<TangleDiagram> {
    let mut out = d.clone();
    let n = d.slices.len();
    match *mv {
        Move::R2Insert { level, pos, positive_first } => {
            if level > n {
                return na(format!("level {level} out of range"));
            }
            let st = d.strands_at(level);
            if pos + 1 >= st.len() {
                return na(format!("no strands at positions {pos}, {}", pos + 1));
            }
            let (a, b) = (st[pos].clone(), st[pos + 1].clone());
            let s1 = around(&st, pos, cross(positive_first, &a, &b));
            let mut st2 = st.clone();
            st2.swap(pos, pos + 1);
            let s2 = around(&st2, pos, cross(!positive_first, &b, &a));
            out.slices.splice(level..level, [s1, s2]);
            out.lines.splice(level..level, [0, 0]);
        }
        Move::R2Delete { slice } => {
            if slice + 1 >= n {
                return na("R2 deletion needs two slices");
            }
            let (Some((p1, s1, a1, b1)), Some((p2, s2, a2, b2))) =
                (single_crossing(&d.slices[slice]), single_crossing(&d.slices[slice + 1]))
            else {
                return na("slices are not single crossings");
            };
            if p1 != p2 || s1 == s2 || a1 != b2 || b1 != a2 {
                return na("crossings are not mutually inverse");
            }
            out.slices.drain(slice..slice + 2);
            out.lines.drain(slice..slice + 2);
            if out.slices.is_empty() {
                let st = d.strands_at(slice);
                out.slices.push(Slice { gens: ids(&st) });
                out.lines.push(0);
            }
        }
        Move::R3Slide { slice } => {
            if slice + 2 >= n {
                return na("R3 needs three slices");
            }
            let cs: Option<Vec<_>> = (0..3).map(|k| single_crossing(&d.slices[slice + k])).collect();
            let Some(cs) = cs else {
                return na("slices are not single crossings");
            };
            let sign = cs[0].1;
            if cs.iter().any(|c| c.1 != sign) {
                return na("R3 slide needs crossings of one sign");
            }
            let (q0, q1, q2) = (cs[0].0, cs[1].0, cs[2].0);
            let st = d.strands_at(slice);
            let p = if q0 == q2 && q1 == q0 + 1 {
                q0
            } else if q0 == q2 && q0 >= 1 && q1 == q0 - 1 {
                q1
            } else {
                return na("crossings do not form a braid triangle");
            };
            let (a, b, c) = (st[p].clone(), st[p + 1].clone(), st[p + 2].clone());
            // σ1σ2σ1 on (a,b,c): x(a,b)@p, x(a,c)@p+1, x(b,c)@p
            // σ2σ1σ2 on (a,b,c): x(b,c)@p+1, x(a,c)@p, x(a,b)@p+1
            let plan: [(usize, &Strand, &Strand); 3] = if q0 == p {
                [(p + 1, &b, &c), (p, &a, &c), (p + 1, &a, &b)]
            } else {
                [(p, &a, &b), (p + 1, &a, &c), (p, &b, &c)]
            };
            let mut cur = st.clone();
            let mut new = Vec::new();
            for (q, x, y) in plan {
                new.push(around(&cur, q, cross(sign, x, y)));
                cur.swap(q, q + 1);
            }
            out.slices.splice(slice..slice + 3, new);
        }
        Move::FramedR1InsertPair { level, pos } => {
            if level > n {
                return na(format!("level {level} out of range"));
            }
            let st = d.strands_at(level);
            let Some(s) = st.get(pos) else {
                return na(format!("no strand at position {pos}"));
            };
            if !s.up {
                return na("kinks are inserted on upward strands");
            }
            let (left, right) = (&st[..pos], &st[pos + 1..]);
            let x = s.obj.clone();
            let up = Strand::new(&x, true);
            let down = Strand::new(&x, false);
            let row = |mid: Vec<Gen>| {
                let mut g = ids(left);
                g.extend(mid);
                g.extend(ids(right));
                Slice { gens: g }
            };
            let mut new = Vec::new();
            for positive in [true, false] {
                new.push(row(vec![Gen::Id(up.clone()), Gen::CupR(x.clone())]));
                new.push(row(vec![cross(positive, &up, &up), Gen::Id(down.clone())]));
                new.push(row(vec![Gen::Id(up.clone()), Gen::CapR(x.clone())]));
            }
            out.slices.splice(level..level, new);
            out.lines.splice(level..level, [0; 6]);
        }
        Move::RotateCut => {
            if n < 2 {
                return na("rotate_cut needs a closure with a cup and a cap slice");
            }
            let first = &d.slices[0].gens;
            let last = &d.slices[n - 1].gens;
            let mid = &d.slices[1..n - 1];
            let mut new = Vec::with_capacity(n);
            match (first.as_slice(), last.as_slice()) {
                // closure of the first strand Z, section S
                ([Gen::CupL(z), Gen::Id(s)], [Gen::CapL(z2), Gen::Id(s2)]) if z == z2 && s == s2 && s.up => {
                    let zd = Strand::new(z, false);
                    if !mid.iter().all(|sl| sl.gens.first() == Some(&Gen::Id(zd.clone()))) {
                        return na("middle slices must carry the closed strand on the left");
                    }
                    let zu = Strand::new(z, true);
                    let sd = Strand::new(&s.obj, false);
                    new.push(Slice { gens: vec![Gen::Id(zu.clone()), Gen::CupR(s.obj.clone())] });
                    for sl in mid {
                        let mut g = sl.gens[1..].to_vec();
                        g.push(Gen::Id(sd.clone()));
                        new.push(Slice { gens: g });
                    }
                    new.push(Slice { gens: vec![Gen::Id(zu), Gen::CapR(s.obj.clone())] });
                }
                // closure of the second strand V, section S
                ([Gen::Id(s), Gen::CupR(v)], [Gen::Id(s2), Gen::CapR(v2)]) if v == v2 && s == s2 && s.up => {
                    let vd = Strand::new(v, false);
                    if !mid.iter().all(|sl| sl.gens.last() == Some(&Gen::Id(vd.clone()))) {
                        return na("middle slices must carry the closed strand on the right");
                    }
                    let vu = Strand::new(v, true);
                    let sd = Strand::new(&s.obj, false);
                    new.push(Slice { gens: vec![Gen::CupL(s.obj.clone()), Gen::Id(vu.clone())] });
                    for sl in mid {
                        let mut g = vec![Gen::Id(sd.clone())];
                        g.extend_from_slice(&sl.gens[..sl.gens.len() - 1]);
                        new.push(Slice { gens: g });
                    }
                    new.push(Slice { gens: vec![Gen::CapL(s.obj.clone()), Gen::Id(vu)] });
                }
                _ => return na("diagram is not a two-strand closure"),
            }
            out.slices = new;
            out.lines = vec![0; n];
        }
        Move::SplitSlice { slice, at } => {
            if slice >= n {
                return na(format!("slice {slice} out of range"));
            }
            let gens = &d.slices[slice].gens;
            if at == 0 || at >= gens.len() {
                return na("split point must leave generators on both sides");
            }
            let (lo, hi) = gens.split_at(at);
            let mut g1 = lo.to_vec();
            g1.extend(ids(&hi.iter().flat_map(|g| g.inputs()).collect::<Vec<_>>()));
            let mut g2 = ids(&lo.iter().flat_map(|g| g.outputs()).collect::<Vec<_>>());
            g2.extend_from_slice(hi);
            out.slices.splice(slice..slice + 1, [Slice { gens: g1 }, Slice { gens: g2 }]);
            out.lines.splice(slice..slice + 1, [0, 0]);
        }
    }
    if out.lines.len() != out.slices.len() {
        out.lines = vec![0; out.slices.len()];
    }
    out.type_check()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::{evaluate, parse, renormalized_invariant, Bindings};
    use super::*;

    fn braid3() -> TangleDiagram {
        parse(
            "param ell = 3\nlet A = nilpotent(alpha=1/4)\nlet B = nilpotent(alpha=1/5)\n\
             let C = nilpotent(alpha=-2/7)\nslice id(A+) id(B+) id(C+)\n",
        )
        .unwrap()
    }

    #[test]
    fn r2_round_trip() {
        let d = braid3();
        let b = Bindings::new();
        let f = evaluate(&d, &b).unwrap();
        for positive_first in [true, false] {
            let m = apply_move(&d, &Move::R2Insert { level: 1, pos: 1, positive_first }).unwrap();
            assert_eq!(m.slices.len(), 3);
            assert_eq!(evaluate(&m, &b).unwrap(), f);
            let back = apply_move(&m, &Move::R2Delete { slice: 1 }).unwrap();
            assert_eq!(back, d);
        }
        assert!(matches!(
            apply_move(&d, &Move::R2Delete { slice: 0 }),
            Err(Error::MoveNotApplicable(_))
        ));
    }

    #[test]
    fn r3_both_ways() {
        let d = braid3();
        let b = Bindings::new();
        // build σ1σ2σ1 by hand through the text format
        let t = format!(
            "{}slice xp(A+,B+) id(C+)\nslice id(B+) xp(A+,C+)\nslice xp(B+,C+) id(A+)\n",
            d.to_text()
        );
        let d = parse(&t).unwrap();
        let f = evaluate(&d, &b).unwrap();
        let m = apply_move(&d, &Move::R3Slide { slice: 1 }).unwrap();
        assert_ne!(m, d);
        assert_eq!(evaluate(&m, &b).unwrap(), f);
        let back = apply_move(&m, &Move::R3Slide { slice: 1 }).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn kinks_and_splits() {
        let d = parse("param ell = 4\nlet V = nilpotent(alpha=1/3)\nslice id(V+)\n").unwrap();
        let b = Bindings::new();
        let m = apply_move(&d, &Move::FramedR1InsertPair { level: 1, pos: 0 }).unwrap();
        assert_eq!(m.slices.len(), 7);
        assert_eq!(
            renormalized_invariant(&m, &b).unwrap(),
            renormalized_invariant(&d, &b).unwrap()
        );
        let s = apply_move(&m, &Move::SplitSlice { slice: 1, at: 1 }).unwrap();
        assert_eq!(evaluate(&s, &b).unwrap(), evaluate(&m, &b).unwrap());
    }

    #[test]
    fn rotate_cut_round_trip() {
        let d = parse(
            "param ell = 3\nlet Z = nilpotent(alpha=0)\nlet V = nilpotent(alpha=1/3)\n\
             slice cupl(Z) id(V+)\nslice id(Z-) xp(Z+,V+)\nslice id(Z-) xp(V+,Z+)\nslice capl(Z) id(V+)\n",
        )
        .unwrap();
        let m = apply_move(&d, &Move::RotateCut).unwrap();
        assert_eq!(m.bottom(), vec![Strand::new("Z", true)]);
        assert_eq!(apply_move(&m, &Move::RotateCut).unwrap(), d);
        let b = Bindings::new();
        assert_eq!(
            renormalized_invariant(&m, &b).unwrap(),
            renormalized_invariant(&d, &b).unwrap()
        );
    }
}
