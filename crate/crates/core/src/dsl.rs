//! Group expression language.
//!
//! ```text
//! expr := term ('x' term)*
//! term := atom ('^' int)?
//! atom := 'C' int | 'Q8' | 'Dic(' int ')' | 'GDic(' ints ';' int ')'
//!       | 'PQ(' int ',' int ',' int ',' int (',' int)? ')'
//!       | 'Perm[' perm (',' perm)* ']' | 'S' int | 'A' int | 'D' int
//!       | '(' expr ')'
//! perm := ('(' int* ')')+
//! ```

use std::fmt;

use thiserror::Error;

use crate::group::{FiniteGroup, GroupError, PqFamilyParams, MAX_ORDER};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DslError {
    #[error("syntax error at line {line}, col {col}: expected {}", .expected.join(" or "))]
    SyntaxError { line: usize, col: usize, expected: Vec<String> },
    #[error("group order {0} exceeds 512")]
    OrderBound(u64),
    #[error(transparent)]
    Build(#[from] GroupError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Cyclic(u32),
    Q8,
    Dic(u32),
    GDic { invariants: Vec<u32>, t: usize },
    Pq { p: u32, q: u32, c: u32, d: u32, k: Option<u64> },
    /// Permutations as cycle lists on points `1..`.
    Perm(Vec<Vec<Vec<usize>>>),
    Symmetric(u32),
    Alternating(u32),
    Dihedral(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupExpr {
    Atom(Atom),
    Power(Box<GroupExpr>, u32),
    Product(Vec<GroupExpr>),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Cyclic(n) => write!(f, "C{n}"),
            Atom::Q8 => write!(f, "Q8"),
            Atom::Dic(m) => write!(f, "Dic({m})"),
            Atom::GDic { invariants, t } => {
                let inv: Vec<String> = invariants.iter().map(u32::to_string).collect();
                write!(f, "GDic({};{t})", inv.join(","))
            }
            Atom::Pq { p, q, c, d, k } => {
                write!(f, "PQ({p},{q},{c},{d}")?;
                if let Some(k) = k {
                    write!(f, ",{k}")?;
                }
                write!(f, ")")
            }
            Atom::Perm(perms) => {
                write!(f, "Perm[")?;
                for (i, p) in perms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    if p.is_empty() {
                        write!(f, "()")?;
                    }
                    for cyc in p {
                        let pts: Vec<String> = cyc.iter().map(usize::to_string).collect();
                        write!(f, "({})", pts.join(" "))?;
                    }
                }
                write!(f, "]")
            }
            Atom::Symmetric(n) => write!(f, "S{n}"),
            Atom::Alternating(n) => write!(f, "A{n}"),
            Atom::Dihedral(n) => write!(f, "D{n}"),
        }
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Atom(a) => write!(f, "{a}"),
            GroupExpr::Power(base, r) => match **base {
                GroupExpr::Atom(_) => write!(f, "{base}^{r}"),
                _ => write!(f, "({base})^{r}"),
            },
            GroupExpr::Product(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " x ")?;
                    }
                    match p {
                        GroupExpr::Product(_) => write!(f, "({p})")?,
                        _ => write!(f, "{p}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn location(&self, pos: usize) -> (usize, usize) {
        let before = &self.src[..pos.min(self.src.len())];
        let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
        let col = pos - before.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1) + 1;
        (line, col)
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, DslError> {
        let (line, col) = self.location(self.pos);
        Err(DslError::SyntaxError {
            line,
            col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), DslError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.fail(&[&format!("'{s}'")])
        }
    }

    fn int(&mut self) -> Result<u64, DslError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail(&["integer"]);
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match text.parse::<u64>() {
            Ok(v) if v <= u32::MAX as u64 => Ok(v),
            _ => {
                self.pos = start;
                self.fail(&["integer below 2^32"])
            }
        }
    }

    fn small(&mut self) -> Result<u32, DslError> {
        self.int().map(|v| v as u32)
    }

    // Integer directly after a keyword, no whitespace allowed.
    fn suffix_int(&mut self) -> Result<u32, DslError> {
        if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.small()
        } else {
            self.fail(&["integer"])
        }
    }

    fn expr(&mut self) -> Result<GroupExpr, DslError> {
        let mut parts = vec![self.term()?];
        while self.peek() == Some(b'x') {
            self.pos += 1;
            parts.push(self.term()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { GroupExpr::Product(parts) })
    }

    fn term(&mut self) -> Result<GroupExpr, DslError> {
        let base = self.atom()?;
        if self.eat("^") {
            let start = self.pos;
            let r = self.small()?;
            if r == 0 {
                self.pos = start;
                self.skip_ws();
                return self.fail(&["positive exponent"]);
            }
            return Ok(GroupExpr::Power(Box::new(base), r));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<GroupExpr, DslError> {
        const ATOMS: &[&str] = &["'C'", "'Q8'", "'Dic('", "'GDic('", "'PQ('", "'Perm['", "'S'", "'A'", "'D'", "'('"];
        self.skip_ws();
        let a = if self.eat("(") {
            let inner = self.expr()?;
            self.expect(")")?;
            return Ok(inner);
        } else if self.eat("Q8") {
            Atom::Q8
        } else if self.eat("Dic(") {
            let m = self.small()?;
            self.expect(")")?;
            Atom::Dic(m)
        } else if self.eat("GDic(") {
            let mut invariants = vec![self.small()?];
            while self.eat(",") {
                invariants.push(self.small()?);
            }
            self.expect(";")?;
            let t = self.int()? as usize;
            self.expect(")")?;
            Atom::GDic { invariants, t }
        } else if self.eat("PQ(") {
            let p = self.small()?;
            self.expect(",")?;
            let q = self.small()?;
            self.expect(",")?;
            let c = self.small()?;
            self.expect(",")?;
            let d = self.small()?;
            let k = if self.eat(",") { Some(self.int()?) } else { None };
            self.expect(")")?;
            Atom::Pq { p, q, c, d, k }
        } else if self.eat("Perm[") {
            let mut perms = vec![self.perm()?];
            while self.eat(",") {
                perms.push(self.perm()?);
            }
            self.expect("]")?;
            Atom::Perm(perms)
        } else if self.eat("C") {
            Atom::Cyclic(self.suffix_int()?)
        } else if self.eat("S") {
            Atom::Symmetric(self.suffix_int()?)
        } else if self.eat("A") {
            Atom::Alternating(self.suffix_int()?)
        } else if self.eat("D") {
            Atom::Dihedral(self.suffix_int()?)
        } else {
            return self.fail(ATOMS);
        };
        Ok(GroupExpr::Atom(a))
    }

    fn perm(&mut self) -> Result<Vec<Vec<usize>>, DslError> {
        let mut cycles = Vec::new();
        self.expect("(")?;
        loop {
            let mut cyc = Vec::new();
            while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                let start = self.pos;
                let v = self.int()? as usize;
                if v == 0 {
                    self.pos = start;
                    return self.fail(&["point >= 1"]);
                }
                cyc.push(v);
            }
            self.expect(")")?;
            if !cyc.is_empty() {
                cycles.push(cyc);
            }
            if !self.eat("(") {
                break;
            }
        }
        Ok(cycles)
    }
}

pub fn parse_group_expr(text: &str) -> Result<GroupExpr, DslError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.fail(&["'x'", "end of input"]);
    }
    e.order()?;
    Ok(e)
}

fn perm_images(cycles: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut img: Vec<usize> = (0..n).collect();
    for cyc in cycles {
        for (i, &a) in cyc.iter().enumerate() {
            img[a - 1] = cyc[(i + 1) % cyc.len()] - 1;
        }
    }
    img
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

impl GroupExpr {
    /// Order without building the group; `OrderBound` past 512 where that can
    /// be decided cheaply.
    pub fn order(&self) -> Result<u64, DslError> {
        let bound = |n: u64| if n > MAX_ORDER as u64 { Err(DslError::OrderBound(n)) } else { Ok(n) };
        match self {
            GroupExpr::Atom(a) => bound(match a {
                Atom::Cyclic(n) => *n as u64,
                Atom::Q8 => 8,
                Atom::Dic(m) => 4 * *m as u64,
                Atom::GDic { invariants, .. } => {
                    2 * invariants.iter().fold(1u64, |acc, &m| acc.saturating_mul(m as u64))
                }
                Atom::Pq { p, q, c, d, .. } => (*p as u64)
                    .checked_pow(c + d)
                    .map_or(u64::MAX, |x| x.saturating_mul(*q as u64)),
                Atom::Perm(_) => 1,
                Atom::Symmetric(n) => factorial((*n as u64).min(20)),
                Atom::Alternating(n) => factorial((*n as u64).min(20)) / 2,
                Atom::Dihedral(n) => 2 * *n as u64,
            }),
            GroupExpr::Power(b, r) => {
                let o = b.order()?;
                bound(o.checked_pow(*r).unwrap_or(u64::MAX))
            }
            GroupExpr::Product(ps) => {
                let mut acc = 1u64;
                for p in ps {
                    acc = bound(acc.saturating_mul(p.order()?))?;
                }
                Ok(acc)
            }
        }
    }

    pub fn build(&self) -> Result<FiniteGroup, DslError> {
        self.order()?;
        let mut g = match self {
            GroupExpr::Atom(a) => match a {
                Atom::Cyclic(n) => FiniteGroup::cyclic(*n)?,
                Atom::Q8 => FiniteGroup::quaternion(),
                Atom::Dic(m) => FiniteGroup::dicyclic(*m)?,
                Atom::GDic { invariants, t } => FiniteGroup::generalized_dicyclic(invariants, *t)?,
                Atom::Pq { p, q, c, d, k } => {
                    let mut params = PqFamilyParams::new(*p, *q, *c, *d)?;
                    if let Some(k) = k {
                        params.k = *k;
                    }
                    FiniteGroup::pq_family(&params)?.0
                }
                Atom::Perm(perms) => {
                    let n = perms.iter().flatten().flatten().copied().max().unwrap_or(1);
                    let gens: Vec<Vec<usize>> = perms.iter().map(|p| perm_images(p, n)).collect();
                    FiniteGroup::from_permutations(&gens)?
                }
                Atom::Symmetric(n) => FiniteGroup::symmetric(*n as usize)?,
                Atom::Alternating(n) => FiniteGroup::alternating(*n as usize)?,
                Atom::Dihedral(n) => FiniteGroup::dihedral(*n)?,
            },
            GroupExpr::Power(b, r) => {
                let base = b.build()?;
                let mut acc = base.clone();
                for _ in 1..*r {
                    acc = FiniteGroup::direct_product(&acc, &base)?;
                }
                acc
            }
            GroupExpr::Product(ps) => {
                let mut acc = ps[0].build()?;
                for p in &ps[1..] {
                    acc = FiniteGroup::direct_product(&acc, &p.build()?)?;
                }
                acc
            }
        };
        g.set_name(self.to_string());
        Ok(g)
    }
}

pub fn build_group(text: &str) -> Result<FiniteGroup, DslError> {
    parse_group_expr(text)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let e = parse_group_expr("Q8 x C2^2 x C7").unwrap();
        assert!(matches!(&e, GroupExpr::Product(v) if v.len() == 3));
        assert_eq!(e.order().unwrap(), 224);
        assert_eq!(build_group("PQ(3,7,1,1)").unwrap().order(), 63);
        match parse_group_expr("Dic(") {
            Err(DslError::SyntaxError { line: 1, col: 5, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_group_expr("C64 x C16"), Err(DslError::OrderBound(1024))));
    }

    #[test]
    fn named_and_perm() {
        assert_eq!(build_group("S3").unwrap().order(), 6);
        assert_eq!(build_group("D4").unwrap().order(), 8);
        assert_eq!(build_group("Perm[(1 2), (1 2 3)]").unwrap().order(), 6);
        assert_eq!(build_group("Perm[(1 2 3 4)]").unwrap().order(), 4);
        assert_eq!(build_group("GDic(4,2;2)").unwrap().order(), 16);
        assert_eq!(build_group("(C2 x C3)^2").unwrap().order(), 36);
        assert_eq!(build_group(" Dic( 3 )x C5 ").unwrap().name(), "Dic(3) x C5");
        assert!(matches!(build_group("GDic(2;1)"), Err(DslError::Build(GroupError::AbelianResult))));
    }

    #[test]
    fn positioned_errors() {
        match parse_group_expr("C2 x\n  Q9") {
            Err(DslError::SyntaxError { line: 2, col: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(parse_group_expr("C2 C3").is_err());
        assert!(parse_group_expr("C2^0").is_err());
    }

    fn arb_atom() -> impl Strategy<Value = Atom> {
        prop_oneof![
            (1u32..30).prop_map(Atom::Cyclic),
            Just(Atom::Q8),
            (2u32..9).prop_map(Atom::Dic),
            (prop::collection::vec(2u32..9, 1..3), 0usize..8).prop_map(|(invariants, t)| Atom::GDic { invariants, t }),
            (2u32..5, 3u32..14, 1u32..3, 1u32..3, prop::option::of(2u64..9))
                .prop_map(|(p, q, c, d, k)| Atom::Pq { p, q, c, d, k }),
            prop::collection::vec(prop::collection::vec(prop::collection::vec(1usize..6, 1..4), 0..3), 1..3)
                .prop_map(Atom::Perm),
            (3u32..6).prop_map(Atom::Symmetric),
            (3u32..6).prop_map(Atom::Alternating),
            (3u32..9).prop_map(Atom::Dihedral),
        ]
    }

    fn arb_expr() -> impl Strategy<Value = GroupExpr> {
        let leaf = arb_atom().prop_map(GroupExpr::Atom);
        leaf.prop_recursive(3, 12, 3, |inner| {
            prop_oneof![
                (inner.clone(), 1u32..4).prop_map(|(b, r)| match b {
                    GroupExpr::Power(..) => b,
                    _ => GroupExpr::Power(Box::new(b), r),
                }),
                prop::collection::vec(inner, 2..4).prop_map(GroupExpr::Product),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(e in arb_expr()) {
            let text = e.to_string();
            let mut p = Parser { src: text.as_bytes(), pos: 0 };
            let back = p.expr().unwrap();
            prop_assert_eq!(back.to_string(), text.clone());
            prop_assert_eq!(back, e);
        }
    }
}
