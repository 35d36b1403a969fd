use std::collections::HashSet;
use std::rc::Rc;

use num_bigint::BigInt;

use super::lexer::{Token, TokenKind};
use super::{KispError, Phase, Pos};

/// Names with fixed meaning. None of them can be bound by `define` or used as
/// a lambda parameter.
pub const KEYWORDS: [&str; 9] = [
    "true", "false", "define", "lambda", "people", "now", "void", "if", "vacant",
];

/// Short-circuiting special forms. Reserved for the same reason as keywords.
pub const SPECIAL_FORMS: [&str; 2] = ["and", "or"];

pub fn is_reserved(name: &str) -> bool {
    KEYWORDS.contains(&name) || SPECIAL_FORMS.contains(&name)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Num(BigInt),
    Text(Rc<str>),
    Bool(bool),
    Void,
    Vacant,
    People,
    Now,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lambda {
    pub params: Vec<String>,
    pub body: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Literal(Literal),
    Reference(String),
    Lambda(Rc<Lambda>),
    Define(String, Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Application(Box<Expr>, Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

enum Sexp {
    Atom(Token),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(t) => t.pos,
            Sexp::List(_, p) => *p,
        }
    }
}

fn syntax(pos: Pos, msg: impl Into<String>) -> KispError {
    KispError::new(Phase::Syntax, pos, msg)
}

fn read(tokens: Vec<Token>) -> Result<Vec<Sexp>, KispError> {
    let mut stack: Vec<(Vec<Sexp>, Pos)> = Vec::new();
    let mut top = Vec::new();
    for tok in tokens {
        match tok.kind {
            TokenKind::Open => stack.push((Vec::new(), tok.pos)),
            TokenKind::Close => {
                let (items, pos) = stack
                    .pop()
                    .ok_or_else(|| syntax(tok.pos, "unbalanced `)`"))?;
                let list = Sexp::List(items, pos);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(list),
                    None => top.push(list),
                }
            }
            _ => match stack.last_mut() {
                Some((parent, _)) => parent.push(Sexp::Atom(tok)),
                None => top.push(Sexp::Atom(tok)),
            },
        }
    }
    if let Some((_, pos)) = stack.pop() {
        return Err(syntax(pos, "unclosed `(`"));
    }
    Ok(top)
}

fn binding_name(s: &Sexp, what: &str) -> Result<String, KispError> {
    match s {
        Sexp::Atom(Token {
            kind: TokenKind::Ref(name),
            pos,
        }) => {
            if is_reserved(name) {
                Err(syntax(
                    *pos,
                    format!("`{name}` is reserved and cannot be used as a {what}"),
                ))
            } else {
                Ok(name.clone())
            }
        }
        other => Err(syntax(
            other.pos(),
            format!("expected a reference as {what}"),
        )),
    }
}

fn convert(s: Sexp, top_level: bool) -> Result<Expr, KispError> {
    let pos = s.pos();
    let kind = match s {
        Sexp::Atom(tok) => match tok.kind {
            TokenKind::Num(n) => ExprKind::Literal(Literal::Num(n)),
            TokenKind::Str(s) => ExprKind::Literal(Literal::Text(s.into())),
            TokenKind::Op(op) => ExprKind::Reference(op),
            TokenKind::Ref(name) => match name.as_str() {
                "true" => ExprKind::Literal(Literal::Bool(true)),
                "false" => ExprKind::Literal(Literal::Bool(false)),
                "void" => ExprKind::Literal(Literal::Void),
                "vacant" => ExprKind::Literal(Literal::Vacant),
                "people" => ExprKind::Literal(Literal::People),
                "now" => ExprKind::Literal(Literal::Now),
                "define" | "lambda" | "if" | "and" | "or" => {
                    return Err(syntax(
                        pos,
                        format!("`{name}` must appear at the head of a form"),
                    ))
                }
                _ => ExprKind::Reference(name),
            },
            TokenKind::Open | TokenKind::Close => {
                unreachable!("parentheses are consumed by the reader")
            }
        },
        Sexp::List(items, _) if items.is_empty() => {
            return Err(syntax(pos, "() is not a well-formed term"));
        }
        Sexp::List(items, _) => {
            let head = match &items[0] {
                Sexp::Atom(Token {
                    kind: TokenKind::Ref(name),
                    ..
                }) => Some(name.clone()),
                _ => None,
            };
            match head.as_deref() {
                Some("define") => {
                    if !top_level {
                        return Err(syntax(pos, "`define` is only allowed at top level"));
                    }
                    let [_, name, value]: [Sexp; 3] = items
                        .try_into()
                        .map_err(|_| syntax(pos, "expected (define reference term)"))?;
                    let name = binding_name(&name, "definition name")?;
                    ExprKind::Define(name, Box::new(convert(value, false)?))
                }
                Some("lambda") => {
                    let [_, params, body]: [Sexp; 3] = items
                        .try_into()
                        .map_err(|_| syntax(pos, "expected (lambda (reference*) term)"))?;
                    let Sexp::List(params, ppos) = params else {
                        return Err(syntax(params.pos(), "lambda parameters must be a list"));
                    };
                    let mut seen = HashSet::new();
                    let mut names = Vec::with_capacity(params.len());
                    for p in &params {
                        let name = binding_name(p, "parameter")?;
                        if !seen.insert(name.clone()) {
                            return Err(syntax(ppos, format!("duplicate parameter `{name}`")));
                        }
                        names.push(name);
                    }
                    let body = convert(body, false)?;
                    ExprKind::Lambda(Rc::new(Lambda {
                        params: names,
                        body,
                    }))
                }
                Some("if") => {
                    let [_, c, t, e]: [Sexp; 4] = items
                        .try_into()
                        .map_err(|_| syntax(pos, "expected (if condition then else)"))?;
                    ExprKind::If(
                        Box::new(convert(c, false)?),
                        Box::new(convert(t, false)?),
                        Box::new(convert(e, false)?),
                    )
                }
                Some(form @ ("and" | "or")) => {
                    let args = items
                        .into_iter()
                        .skip(1)
                        .map(|s| convert(s, false))
                        .collect::<Result<Vec<_>, _>>()?;
                    if form == "and" {
                        ExprKind::And(args)
                    } else {
                        ExprKind::Or(args)
                    }
                }
                _ => {
                    let mut it = items.into_iter();
                    let head = convert(it.next().expect("non-empty"), false)?;
                    let args = it
                        .map(|s| convert(s, false))
                        .collect::<Result<Vec<_>, _>>()?;
                    ExprKind::Application(Box::new(head), args)
                }
            }
        }
    };
    Ok(Expr { kind, pos })
}

/// Builds the top-level expression sequence.
pub fn parse(tokens: Vec<Token>) -> Result<Vec<Expr>, KispError> {
    read(tokens)?
        .into_iter()
        .map(|s| convert(s, true))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::lexer::tokenize;

    fn p(src: &str) -> Result<Vec<Expr>, KispError> {
        parse(tokenize(src)?)
    }

    #[test]
    fn top_level_define() {
        let e = p("(define three 3)").unwrap();
        match &e[0].kind {
            ExprKind::Define(name, v) => {
                assert_eq!(name, "three");
                assert_eq!(v.kind, ExprKind::Literal(Literal::Num(3.into())));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn niladic_lambda() {
        let e = p("(lambda () 'Hello, World!')").unwrap();
        let ExprKind::Lambda(l) = &e[0].kind else {
            panic!()
        };
        assert!(l.params.is_empty());
        assert_eq!(
            l.body.kind,
            ExprKind::Literal(Literal::Text("Hello, World!".into()))
        );
    }

    #[test]
    fn rejected_forms() {
        for bad in [
            "()",
            "(+ 2 (define three 3))",
            "(lambda (x) (define y 1))",
            "(define true 1)",
            "(define now 1)",
            "(lambda (people) 1)",
            "(lambda x x)",
            "(lambda (x x) x)",
            "(lambda (x 1) x)",
            "(lambda (x))",
            "(if true 1)",
            "(define x)",
            "(define 3 4)",
            "(define + 4)",
            "(define and 1)",
            "(map lambda people)",
            "(+ 1",
            "1)",
        ] {
            let err = p(bad).unwrap_err();
            assert_eq!(err.phase, Phase::Syntax, "{bad}");
        }
    }

    #[test]
    fn every_keyword_is_unbindable() {
        for kw in KEYWORDS {
            assert!(p(&format!("(define {kw} 1)")).is_err(), "{kw}");
            assert!(p(&format!("(lambda ({kw}) 1)")).is_err(), "{kw}");
        }
    }

    #[test]
    fn positions_point_at_the_form() {
        let err = p("(+ 1\n   ())").unwrap_err();
        assert_eq!(err.pos, Pos { line: 2, col: 4 });
    }
}
