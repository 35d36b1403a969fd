//! Artificial kinship terms: six basic atoms closed under concatenation,
//! fork, inverse and dual.
//!
//! Concrete notation:
//!
//! | operation     | notation            |
//! |---------------|---------------------|
//! | concatenation | `a . b` or `a b`    |
//! | fork          | `a \| b`            |
//! | inverse       | `a^-1`              |
//! | dual          | `a^+`               |
//!
//! Fork binds weakest and groups to the left; concatenation groups to the
//! right, so `son (father | mother) (father | mother)` reads as
//! `son . ((father | mother) . (father | mother))`. Postfix operators bind
//! tightest.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasicKin {
    Father,
    Mother,
    Son,
    Daughter,
    Husband,
    Wife,
}

impl BasicKin {
    pub const ALL: [BasicKin; 6] = [
        BasicKin::Father,
        BasicKin::Mother,
        BasicKin::Son,
        BasicKin::Daughter,
        BasicKin::Husband,
        BasicKin::Wife,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BasicKin::Father => "father",
            BasicKin::Mother => "mother",
            BasicKin::Son => "son",
            BasicKin::Daughter => "daughter",
            BasicKin::Husband => "husband",
            BasicKin::Wife => "wife",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        BasicKin::ALL.into_iter().find(|k| k.name() == name)
    }

    /// The same relation with the opposite sex.
    pub fn opposite(self) -> Self {
        match self {
            BasicKin::Father => BasicKin::Mother,
            BasicKin::Mother => BasicKin::Father,
            BasicKin::Son => BasicKin::Daughter,
            BasicKin::Daughter => BasicKin::Son,
            BasicKin::Husband => BasicKin::Wife,
            BasicKin::Wife => BasicKin::Husband,
        }
    }

    pub fn is_male(self) -> bool {
        matches!(self, BasicKin::Father | BasicKin::Son | BasicKin::Husband)
    }
}

impl fmt::Display for BasicKin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KinTerm {
    Basic(BasicKin),
    /// `Concat(a, b)` applies `b` first, then `a`.
    Concat(Box<KinTerm>, Box<KinTerm>),
    Fork(Box<KinTerm>, Box<KinTerm>),
    Inverse(Box<KinTerm>),
    Dual(Box<KinTerm>),
}

impl From<BasicKin> for KinTerm {
    fn from(k: BasicKin) -> Self {
        KinTerm::Basic(k)
    }
}

impl KinTerm {
    pub fn concat(a: impl Into<KinTerm>, b: impl Into<KinTerm>) -> Self {
        KinTerm::Concat(Box::new(a.into()), Box::new(b.into()))
    }

    pub fn fork(a: impl Into<KinTerm>, b: impl Into<KinTerm>) -> Self {
        KinTerm::Fork(Box::new(a.into()), Box::new(b.into()))
    }

    pub fn inverse(t: impl Into<KinTerm>) -> Self {
        KinTerm::Inverse(Box::new(t.into()))
    }

    pub fn dual(t: impl Into<KinTerm>) -> Self {
        KinTerm::Dual(Box::new(t.into()))
    }

    /// Right-nested concatenation of a non-empty sequence of blocks.
    pub fn concat_all(blocks: impl IntoIterator<Item = KinTerm>) -> Option<KinTerm> {
        let blocks: Vec<KinTerm> = blocks.into_iter().collect();
        blocks
            .into_iter()
            .rev()
            .reduce(|acc, t| KinTerm::concat(t, acc))
    }

    /// Left-nested fork of a non-empty sequence of alternatives.
    pub fn fork_all(alts: impl IntoIterator<Item = KinTerm>) -> Option<KinTerm> {
        alts.into_iter().reduce(KinTerm::fork)
    }

    /// Number of concatenation nodes; the size measure used for reduction.
    pub fn concat_count(&self) -> usize {
        match self {
            KinTerm::Basic(_) => 0,
            KinTerm::Concat(a, b) => 1 + a.concat_count() + b.concat_count(),
            KinTerm::Fork(a, b) => a.concat_count() + b.concat_count(),
            KinTerm::Inverse(t) | KinTerm::Dual(t) => t.concat_count(),
        }
    }

    pub fn contains_dual(&self) -> bool {
        match self {
            KinTerm::Basic(_) => false,
            KinTerm::Dual(_) => true,
            KinTerm::Concat(a, b) | KinTerm::Fork(a, b) => a.contains_dual() || b.contains_dual(),
            KinTerm::Inverse(t) => t.contains_dual(),
        }
    }

    pub fn contains_inverse(&self) -> bool {
        match self {
            KinTerm::Basic(_) => false,
            KinTerm::Inverse(_) => true,
            KinTerm::Concat(a, b) | KinTerm::Fork(a, b) => {
                a.contains_inverse() || b.contains_inverse()
            }
            KinTerm::Dual(t) => t.contains_inverse(),
        }
    }

    /// Eliminates every dual node: atoms swap sex, and the flip distributes
    /// over concatenation and fork and commutes with inverse.
    pub fn push_dual(&self) -> KinTerm {
        self.push_dual_flipped(false)
    }

    fn push_dual_flipped(&self, flip: bool) -> KinTerm {
        match self {
            KinTerm::Basic(k) => KinTerm::Basic(if flip { k.opposite() } else { *k }),
            KinTerm::Concat(a, b) => {
                KinTerm::concat(a.push_dual_flipped(flip), b.push_dual_flipped(flip))
            }
            KinTerm::Fork(a, b) => {
                KinTerm::fork(a.push_dual_flipped(flip), b.push_dual_flipped(flip))
            }
            KinTerm::Inverse(t) => KinTerm::inverse(t.push_dual_flipped(flip)),
            KinTerm::Dual(t) => t.push_dual_flipped(!flip),
        }
    }

    /// The maximal concatenation chain, left to right. Each block is a
    /// non-concatenation node.
    pub fn spine(&self) -> Vec<&KinTerm> {
        let mut out = Vec::new();
        self.collect_spine(&mut out);
        out
    }

    fn collect_spine<'a>(&'a self, out: &mut Vec<&'a KinTerm>) {
        match self {
            KinTerm::Concat(a, b) => {
                a.collect_spine(out);
                b.collect_spine(out);
            }
            other => out.push(other),
        }
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for KinTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KinTerm::Basic(k) => write!(f, "{k}"),
            KinTerm::Concat(a, b) => write!(f, "({a} . {b})"),
            KinTerm::Fork(a, b) => write!(f, "({a} | {b})"),
            KinTerm::Inverse(t) => write!(f, "{t}^-1"),
            KinTerm::Dual(t) => write!(f, "{t}^+"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KinParseError {
    #[error("empty kinship term")]
    Empty,
    #[error("unknown kinship atom `{word}` at offset {pos}")]
    UnknownAtom { word: String, pos: usize },
    #[error("unexpected `{found}` at offset {pos}")]
    Unexpected { found: String, pos: usize },
    #[error("unbalanced parentheses at offset {pos}")]
    Unbalanced { pos: usize },
    #[error("unexpected end of input at offset {pos}")]
    UnexpectedEnd { pos: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Atom(BasicKin),
    Open,
    Close,
    Bar,
    Dot,
    Inv,
    Dual,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, KinParseError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::Open,
            b')' => Tok::Close,
            b'|' => Tok::Bar,
            b'.' => Tok::Dot,
            b'^' => {
                if src[i..].starts_with("^-1") {
                    out.push((Tok::Inv, i));
                    i += 3;
                } else if src[i..].starts_with("^+") {
                    out.push((Tok::Dual, i));
                    i += 2;
                } else {
                    return Err(KinParseError::Unexpected {
                        found: "^".into(),
                        pos: i,
                    });
                }
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'-') {
                    i += 1;
                }
                let word = &src[start..i];
                let atom = BasicKin::from_name(word).ok_or_else(|| KinParseError::UnknownAtom {
                    word: word.into(),
                    pos: start,
                })?;
                out.push((Tok::Atom(atom), start));
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(KinParseError::Unexpected {
                    found: ch.to_string(),
                    pos: i,
                });
            }
        };
        out.push((tok, i));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |&(_, o)| o)
    }

    fn fork(&mut self) -> Result<KinTerm, KinParseError> {
        let mut acc = self.concat()?;
        while self.peek() == Some(&Tok::Bar) {
            self.pos += 1;
            acc = KinTerm::fork(acc, self.concat()?);
        }
        Ok(acc)
    }

    fn concat(&mut self) -> Result<KinTerm, KinParseError> {
        let mut blocks = vec![self.postfix()?];
        loop {
            match self.peek() {
                Some(Tok::Dot) => {
                    self.pos += 1;
                    blocks.push(self.postfix()?);
                }
                Some(Tok::Atom(_)) | Some(Tok::Open) => blocks.push(self.postfix()?),
                _ => break,
            }
        }
        Ok(KinTerm::concat_all(blocks).expect("at least one block"))
    }

    fn postfix(&mut self) -> Result<KinTerm, KinParseError> {
        let mut t = self.primary()?;
        loop {
            match self.peek() {
                Some(Tok::Inv) => t = KinTerm::inverse(t),
                Some(Tok::Dual) => t = KinTerm::dual(t),
                _ => return Ok(t),
            }
            self.pos += 1;
        }
    }

    fn primary(&mut self) -> Result<KinTerm, KinParseError> {
        let pos = self.offset();
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Atom(k), _)) => {
                self.pos += 1;
                Ok(KinTerm::Basic(k))
            }
            Some((Tok::Open, open)) => {
                self.pos += 1;
                let inner = self.fork()?;
                match self.peek() {
                    Some(Tok::Close) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    None => Err(KinParseError::Unbalanced { pos: open }),
                    Some(t) => Err(KinParseError::Unexpected {
                        found: tok_text(t).into(),
                        pos: self.offset(),
                    }),
                }
            }
            Some((Tok::Close, _)) => Err(KinParseError::Unbalanced { pos }),
            Some((t, _)) => Err(KinParseError::Unexpected {
                found: tok_text(&t).into(),
                pos,
            }),
            None => Err(KinParseError::UnexpectedEnd { pos }),
        }
    }
}

fn tok_text(t: &Tok) -> &'static str {
    match t {
        Tok::Atom(k) => k.name(),
        Tok::Open => "(",
        Tok::Close => ")",
        Tok::Bar => "|",
        Tok::Dot => ".",
        Tok::Inv => "^-1",
        Tok::Dual => "^+",
    }
}

pub fn parse_kin_term(src: &str) -> Result<KinTerm, KinParseError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(KinParseError::Empty);
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let term = p.fork()?;
    match p.toks.get(p.pos) {
        None => Ok(term),
        Some((Tok::Close, pos)) => Err(KinParseError::Unbalanced { pos: *pos }),
        Some((t, pos)) => Err(KinParseError::Unexpected {
            found: tok_text(t).into(),
            pos: *pos,
        }),
    }
}

impl FromStr for KinTerm {
    type Err = KinParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_kin_term(s)
    }
}

#[cfg(test)]
mod tests {
    use super::BasicKin::*;
    use super::*;

    fn t(s: &str) -> KinTerm {
        s.parse().unwrap()
    }

    #[test]
    fn parses_textbook_terms() {
        assert_eq!(
            t("son (father | mother)"),
            KinTerm::concat(Son, KinTerm::fork(Father, Mother))
        );
        assert_eq!(t("father"), KinTerm::Basic(Father));
        assert_eq!(
            t("(daughter . husband)"),
            KinTerm::concat(Daughter, Husband)
        );
        let parent = || KinTerm::fork(Father, Mother);
        assert_eq!(
            t("son (father|mother) (father|mother)"),
            KinTerm::concat(Son, KinTerm::concat(parent(), parent()))
        );
    }

    #[test]
    fn fork_groups_left_and_binds_weakest() {
        assert_eq!(
            t("son | daughter | wife"),
            KinTerm::fork(KinTerm::fork(Son, Daughter), Wife)
        );
        assert_eq!(
            t("son father | wife"),
            KinTerm::fork(KinTerm::concat(Son, Father), Wife)
        );
    }

    #[test]
    fn postfix_operators() {
        assert_eq!(t("father^-1"), KinTerm::inverse(Father));
        assert_eq!(
            t("(son . father)^+"),
            KinTerm::dual(KinTerm::concat(Son, Father))
        );
        assert_eq!(t("son^+^-1"), KinTerm::inverse(KinTerm::dual(Son)));
    }

    #[test]
    fn rendering() {
        assert_eq!(KinTerm::Basic(Wife).render(), "wife");
        assert_eq!(KinTerm::fork(Son, Daughter).render(), "(son | daughter)");
        assert_eq!(
            KinTerm::dual(KinTerm::concat(Son, Father)).render(),
            "(son . father)^+"
        );
        assert_eq!(KinTerm::inverse(Father).render(), "father^-1");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_kin_term(""), Err(KinParseError::Empty));
        assert_eq!(parse_kin_term("   "), Err(KinParseError::Empty));
        assert_eq!(
            parse_kin_term("son brother"),
            Err(KinParseError::UnknownAtom {
                word: "brother".into(),
                pos: 4
            })
        );
        assert_eq!(
            parse_kin_term("(son | father"),
            Err(KinParseError::Unbalanced { pos: 0 })
        );
        assert_eq!(
            parse_kin_term("son)"),
            Err(KinParseError::Unbalanced { pos: 3 })
        );
        assert!(matches!(
            parse_kin_term("son |"),
            Err(KinParseError::UnexpectedEnd { .. })
        ));
        assert!(matches!(
            parse_kin_term("son ^2"),
            Err(KinParseError::Unexpected { .. })
        ));
    }

    #[test]
    fn dual_pushdown() {
        assert_eq!(KinTerm::dual(Father).push_dual(), KinTerm::Basic(Mother));
        let brother = t("(son (father | mother))^+");
        assert_eq!(brother.push_dual(), t("daughter (mother | father)"));
        let plain = t("son^-1 (father | wife)");
        assert_eq!(plain.push_dual(), plain);
        assert_eq!(t("(father^-1)^+").push_dual(), t("mother^-1"));
        assert_eq!(t("((son . wife)^+)^+").push_dual(), t("son . wife"));
    }

    #[test]
    fn concat_counts() {
        assert_eq!(t("son").concat_count(), 0);
        assert_eq!(t("son (father | mother)").concat_count(), 1);
        assert_eq!(t("son(father|mother)(father|mother)").concat_count(), 2);
        assert_eq!(t("(son father | daughter)^+").concat_count(), 1);
    }

    #[test]
    fn spine_flattens_only_concatenation() {
        let term = t("son (father | mother) (husband . wife)");
        let spine: Vec<String> = term.spine().iter().map(|b| b.render()).collect();
        assert_eq!(spine, ["son", "(father | mother)", "husband", "wife"]);
    }
}
