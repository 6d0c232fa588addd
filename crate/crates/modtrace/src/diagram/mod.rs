//! Slice (Morse) presentation of ribbon tangles colored by weight modules.
//!
//! ```text
//! param ell = 5
//! let V = nilpotent(alpha=1/3)
//! slice id(V+) cupr(V)
//! slice xp(V+,V+) id(V-)
//! slice id(V+) capr(V)
//! ```
//!
//! Slices read bottom to top, generators left to right. A strand `V+` carries
//! V upward, `V-` carries V*. Orientation table:
//!
//! | generator | inputs     | outputs    | morphism |
//! |-----------|------------|------------|----------|
//! | cupr(V)   |            | V+ V-      | coev     |
//! | cupl(V)   |            | V- V+      | coev~    |
//! | capr(V)   | V+ V-      |            | ev~      |
//! | capl(V)   | V- V+      |            | ev       |
//! | xp(X,Y)   | X Y        | Y X        | c_{X,Y}  |
//! | xn(X,Y)   | X Y        | Y X        | c_{Y,X}^{-1} |

mod eval;
mod moves;

use std::fmt;

use crate::cyclo::{fmt_rational, parse_rational, Rational};
use crate::error::{Error, Result};

pub use eval::{evaluate, renormalized_invariant, Bindings};
pub use moves::{apply_move, Move};

/// One strand: an object name and an orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Strand {
    pub obj: String,
    pub up: bool,
}

impl Strand {
    pub fn new(obj: &str, up: bool) -> Strand {
        Strand { obj: obj.to_string(), up }
    }
}

impl fmt::Display for Strand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.obj, if self.up { '+' } else { '-' })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gen {
    Id(Strand),
    CupR(String),
    CupL(String),
    CapR(String),
    CapL(String),
    Xp(Strand, Strand),
    Xn(Strand, Strand),
    Coupon {
        name: String,
        inputs: Vec<Strand>,
        outputs: Vec<Strand>,
    },
}

impl Gen {
    pub fn inputs(&self) -> Vec<Strand> {
        match self {
            Gen::Id(s) => vec![s.clone()],
            Gen::CupR(_) | Gen::CupL(_) => vec![],
            Gen::CapR(v) => vec![Strand::new(v, true), Strand::new(v, false)],
            Gen::CapL(v) => vec![Strand::new(v, false), Strand::new(v, true)],
            Gen::Xp(a, b) | Gen::Xn(a, b) => vec![a.clone(), b.clone()],
            Gen::Coupon { inputs, .. } => inputs.clone(),
        }
    }

    pub fn outputs(&self) -> Vec<Strand> {
        match self {
            Gen::Id(s) => vec![s.clone()],
            Gen::CupR(v) => vec![Strand::new(v, true), Strand::new(v, false)],
            Gen::CupL(v) => vec![Strand::new(v, false), Strand::new(v, true)],
            Gen::CapR(_) | Gen::CapL(_) => vec![],
            Gen::Xp(a, b) | Gen::Xn(a, b) => vec![b.clone(), a.clone()],
            Gen::Coupon { outputs, .. } => outputs.clone(),
        }
    }

    fn names(&self) -> Vec<&str> {
        match self {
            Gen::Id(s) => vec![&s.obj],
            Gen::CupR(v) | Gen::CupL(v) | Gen::CapR(v) | Gen::CapL(v) => vec![v],
            Gen::Xp(a, b) | Gen::Xn(a, b) => vec![&a.obj, &b.obj],
            Gen::Coupon { inputs, outputs, .. } => inputs.iter().chain(outputs).map(|s| s.obj.as_str()).collect(),
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::Id(s) => write!(f, "id({s})"),
            Gen::CupR(v) => write!(f, "cupr({v})"),
            Gen::CupL(v) => write!(f, "cupl({v})"),
            Gen::CapR(v) => write!(f, "capr({v})"),
            Gen::CapL(v) => write!(f, "capl({v})"),
            Gen::Xp(a, b) => write!(f, "xp({a},{b})"),
            Gen::Xn(a, b) => write!(f, "xn({a},{b})"),
            Gen::Coupon { name, inputs, outputs } => {
                let j = |v: &[Strand]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ");
                let (i, o) = (j(inputs), j(outputs));
                let sep = |s: &str| if s.is_empty() { String::new() } else { format!(" {s}") };
                write!(f, "coupon({name}:{} ->{})", sep(&i), sep(&o))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    pub gens: Vec<Gen>,
}

impl Slice {
    pub fn inputs(&self) -> Vec<Strand> {
        self.gens.iter().flat_map(|g| g.inputs()).collect()
    }

    pub fn outputs(&self) -> Vec<Strand> {
        self.gens.iter().flat_map(|g| g.outputs()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Nilpotent(Rational),
    Dual(String),
    Tensor(String, String),
    Trivial,
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decl::Nilpotent(a) => write!(f, "nilpotent(alpha={})", fmt_rational(a)),
            Decl::Dual(v) => write!(f, "dual({v})"),
            Decl::Tensor(a, b) => write!(f, "tensor({a},{b})"),
            Decl::Trivial => write!(f, "trivial"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TangleDiagram {
    pub ell: u64,
    pub decls: Vec<(String, Decl)>,
    pub slices: Vec<Slice>,
    /// Source line of each slice; 0 for slices made by moves.
    pub lines: Vec<usize>,
}

impl PartialEq for TangleDiagram {
    fn eq(&self, o: &Self) -> bool {
        self.ell == o.ell && self.decls == o.decls && self.slices == o.slices
    }
}

impl TangleDiagram {
    pub fn bottom(&self) -> Vec<Strand> {
        self.slices.first().map(|s| s.inputs()).unwrap_or_default()
    }

    pub fn top(&self) -> Vec<Strand> {
        self.slices.last().map(|s| s.outputs()).unwrap_or_default()
    }

    /// Strands between slice `level - 1` and slice `level`.
    pub fn strands_at(&self, level: usize) -> Vec<Strand> {
        if level < self.slices.len() {
            self.slices[level].inputs()
        } else {
            self.top()
        }
    }

    /// Bottom and top are the same single upward strand.
    pub fn is_one_one(&self) -> bool {
        let b = self.bottom();
        b.len() == 1 && b[0].up && b == self.top()
    }

    /// Slice-to-slice boundary matching; slices and positions are 1-based.
    pub fn type_check(&self) -> Result<()> {
        for k in 1..self.slices.len() {
            let out = self.slices[k - 1].outputs();
            let inp = self.slices[k].inputs();
            let n = out.len().max(inp.len());
            for i in 0..n {
                let (e, f) = (out.get(i), inp.get(i));
                if e != f {
                    let show = |s: Option<&Strand>| s.map_or("nothing".to_string(), |s| s.to_string());
                    return Err(Error::TypeMismatch {
                        slice: k + 1,
                        position: i + 1,
                        expected: show(e),
                        found: show(f),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("param ell = {}\n", self.ell);
        for (name, d) in &self.decls {
            s.push_str(&format!("let {name} = {d}\n"));
        }
        for sl in &self.slices {
            let gens: Vec<String> = sl.gens.iter().map(|g| g.to_string()).collect();
            if gens.is_empty() {
                s.push_str("slice\n");
            } else {
                s.push_str(&format!("slice {}\n", gens.join(" ")));
            }
        }
        s
    }
}

struct Cursor<'a> {
    line: usize,
    chars: &'a [char],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::SyntaxError {
            line: self.line,
            col: self.pos + 1,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_') {
            self.pos += 1;
        }
        if start == self.pos || self.chars[start].is_ascii_digit() {
            self.pos = start;
            return self.err("expected a name");
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn token(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && !self.chars[self.pos].is_whitespace() && !"(),".contains(self.chars[self.pos]) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }
}

struct Parser {
    ell: Option<u64>,
    decls: Vec<(String, Decl)>,
    slices: Vec<Slice>,
    lines: Vec<usize>,
}

impl Parser {
    fn known(&self, name: &str) -> bool {
        self.decls.iter().any(|(n, _)| n == name)
    }

    fn name_ref(&self, c: &mut Cursor) -> Result<String> {
        let save = c.pos;
        let n = c.ident()?;
        if !self.known(&n) {
            c.pos = save;
            c.skip_ws();
            return Err(Error::UnknownName(format!("{n} (line {}, column {})", c.line, c.pos + 1)));
        }
        Ok(n)
    }

    fn strand(&self, c: &mut Cursor) -> Result<Strand> {
        let n = self.name_ref(c)?;
        match c.chars.get(c.pos) {
            Some('+') => {
                c.pos += 1;
                Ok(Strand::new(&n, true))
            }
            Some('-') => {
                c.pos += 1;
                Ok(Strand::new(&n, false))
            }
            _ => c.err("expected an orientation '+' or '-'"),
        }
    }

    fn unsigned(&self, c: &mut Cursor, gen: &str) -> Result<String> {
        let n = self.name_ref(c)?;
        if let Some(s @ ('+' | '-')) = c.chars.get(c.pos) {
            return Err(Error::OrientationUnsupported(format!(
                "{gen}({n}{s}) at line {}: cups and caps take an unsigned object",
                c.line
            )));
        }
        Ok(n)
    }

    fn strand_list(&self, c: &mut Cursor, stop: &[char]) -> Result<Vec<Strand>> {
        let mut out = Vec::new();
        loop {
            match c.peek() {
                Some(ch) if stop.contains(&ch) => return Ok(out),
                Some(',') => {
                    c.pos += 1;
                }
                None => return Ok(out),
                _ => out.push(self.strand(c)?),
            }
        }
    }

    fn gen(&self, c: &mut Cursor) -> Result<Gen> {
        let start = c.pos;
        let g = c.ident()?;
        c.eat('(')?;
        let out = match g.as_str() {
            "id" => Gen::Id(self.strand(c)?),
            "cupr" => Gen::CupR(self.unsigned(c, "cupr")?),
            "cupl" => Gen::CupL(self.unsigned(c, "cupl")?),
            "capr" => Gen::CapR(self.unsigned(c, "capr")?),
            "capl" => Gen::CapL(self.unsigned(c, "capl")?),
            "xp" | "xn" => {
                let a = self.strand(c)?;
                c.eat(',')?;
                let b = self.strand(c)?;
                if g == "xp" {
                    Gen::Xp(a, b)
                } else {
                    Gen::Xn(a, b)
                }
            }
            "coupon" => {
                let name = c.ident()?;
                c.eat(':')?;
                let inputs = self.strand_list(c, &['-', ')'])?;
                c.eat('-')?;
                if c.chars.get(c.pos) != Some(&'>') {
                    return c.err("expected '->'");
                }
                c.pos += 1;
                let outputs = self.strand_list(c, &[')'])?;
                Gen::Coupon { name, inputs, outputs }
            }
            _ => {
                c.pos = start;
                c.skip_ws();
                return c.err(format!("unknown generator '{g}'"));
            }
        };
        c.eat(')')?;
        Ok(out)
    }

    fn line(&mut self, lineno: usize, text: &str) -> Result<()> {
        let chars: Vec<char> = text.chars().collect();
        let mut c = Cursor {
            line: lineno,
            chars: &chars,
            pos: 0,
        };
        if c.at_end() {
            return Ok(());
        }
        let kw = c.ident()?;
        match kw.as_str() {
            "param" => {
                let key = c.ident()?;
                if key != "ell" {
                    return c.err(format!("unknown parameter '{key}'"));
                }
                c.eat('=')?;
                let t = c.token();
                let v: u64 = t.parse().or_else(|_| c.err(format!("'{t}' is not a nonnegative integer")))?;
                if self.ell.is_some() {
                    return c.err("ell given twice");
                }
                self.ell = Some(v);
            }
            "let" => {
                let name = c.ident()?;
                if self.known(&name) {
                    return c.err(format!("'{name}' is already defined"));
                }
                c.eat('=')?;
                let kind = c.ident()?;
                let d = match kind.as_str() {
                    "nilpotent" => {
                        c.eat('(')?;
                        let key = c.ident()?;
                        if key != "alpha" {
                            return c.err("expected alpha=");
                        }
                        c.eat('=')?;
                        let t = c.token();
                        let a = parse_rational(&t).or_else(|_| c.err(format!("'{t}' is not a rational")))?;
                        c.eat(')')?;
                        Decl::Nilpotent(a)
                    }
                    "dual" => {
                        c.eat('(')?;
                        let v = self.name_ref(&mut c)?;
                        c.eat(')')?;
                        Decl::Dual(v)
                    }
                    "tensor" => {
                        c.eat('(')?;
                        let a = self.name_ref(&mut c)?;
                        c.eat(',')?;
                        let b = self.name_ref(&mut c)?;
                        c.eat(')')?;
                        Decl::Tensor(a, b)
                    }
                    "trivial" => Decl::Trivial,
                    _ => return c.err(format!("unknown module constructor '{kind}'")),
                };
                self.decls.push((name, d));
            }
            "slice" => {
                let mut gens = Vec::new();
                while !c.at_end() {
                    gens.push(self.gen(&mut c)?);
                }
                self.slices.push(Slice { gens });
                self.lines.push(lineno);
            }
            _ => {
                c.pos = 0;
                c.skip_ws();
                return c.err(format!("unknown statement '{kw}'"));
            }
        }
        if !c.at_end() {
            return c.err("unexpected trailing input");
        }
        Ok(())
    }
}

/// Parse and type-check a diagram.
pub fn parse(text: &str) -> Result<TangleDiagram> {
    let mut p = Parser {
        ell: None,
        decls: Vec::new(),
        slices: Vec::new(),
        lines: Vec::new(),
    };
    let mut last = 1;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        p.line(i + 1, line)?;
        last = i + 1;
    }
    let ell = p.ell.ok_or(Error::SyntaxError {
        line: last,
        col: 1,
        msg: "missing 'param ell = ...'".into(),
    })?;
    if p.slices.is_empty() {
        return Err(Error::SyntaxError {
            line: last,
            col: 1,
            msg: "diagram has no slices".into(),
        });
    }
    let d = TangleDiagram {
        ell,
        decls: p.decls,
        slices: p.slices,
        lines: p.lines,
    };
    for s in &d.slices {
        for g in &s.gens {
            debug_assert!(g.names().iter().all(|n| d.decls.iter().any(|(m, _)| m == n)));
        }
    }
    d.type_check()?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    const KINK: &str = "param ell = 5\nlet V = nilpotent(alpha=1/3)\n\
        slice id(V+) cupr(V)   # open a loop\n\
        slice xp(V+,V+) id(V-)\n\
        slice id(V+) capr(V)\n";

    #[test]
    fn parse_kink() {
        let d = parse(KINK).unwrap();
        assert_eq!(d.ell, 5);
        assert_eq!(d.slices.len(), 3);
        assert!(d.is_one_one());
        assert_eq!(d.lines, vec![3, 4, 5]);
        let again = parse(&d.to_text()).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn coupons_round_trip() {
        let t = "param ell = 3\nlet V = nilpotent(alpha=1/2)\nlet W = dual(V)\n\
                 slice coupon(f: V+ -> V+) id(W+)\nslice coupon(g: V+, W+ -> )\n";
        let d = parse(t).unwrap();
        assert_eq!(d.top(), vec![]);
        assert_eq!(parse(&d.to_text()).unwrap(), d);
    }

    #[test]
    fn errors() {
        let e = parse("param ell = 5\nlet V = nilpotent(alpha=1/3)\nslice id(V+)\nslice id(V-)\n").unwrap_err();
        assert_eq!(
            e,
            Error::TypeMismatch {
                slice: 2,
                position: 1,
                expected: "V+".into(),
                found: "V-".into()
            }
        );
        let e = parse("param ell = 5\nlet V = nilpotent(alpha=1/3)\nslice id(V+) frob(V)\n").unwrap_err();
        assert!(matches!(e, Error::SyntaxError { line: 3, col: 14, .. }), "{e:?}");
        let e = parse("param ell = 5\nslice id(W+)\n").unwrap_err();
        assert!(matches!(e, Error::UnknownName(_)));
        let e = parse("param ell = 5\nlet V = nilpotent(alpha=1/3)\nslice cupr(V+)\n").unwrap_err();
        assert!(matches!(e, Error::OrientationUnsupported(_)));
        let e = parse("let V = nilpotent(alpha=1/3)\nslice id(V+)\n").unwrap_err();
        assert!(matches!(e, Error::SyntaxError { .. }));
        let e = parse("param ell = 5\nlet V = nilpotent(alpha=x)\n").unwrap_err();
        assert!(matches!(e, Error::SyntaxError { line: 2, .. }));
    }
}
