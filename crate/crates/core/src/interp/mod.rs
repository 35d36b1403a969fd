//! The KISP interpreter: a small, dynamically typed LISP whose global scope
//! knows about one family tree and one timeline.

pub mod builtins;
pub mod lexer;
pub mod parser;
pub mod value;

use std::fmt;
use std::io::Write;
use std::rc::Rc;
use std::sync::Arc;

use thiserror::Error;

use crate::family::{FamilyTree, TraditionalTree};
use crate::temporal::Timeline;
use builtins::BUILTINS;
use parser::{Expr, ExprKind, Literal};
pub use value::{Closure, Env, Scope, Value};

const PRELUDE: &str = include_str!("prelude.kisp");

/// Nested calls allowed before evaluation is aborted.
pub const DEFAULT_MAX_DEPTH: usize = 10_000;

// Evaluation recurses on the native stack, which is extended in chunks
// whenever less than the red zone is left.
const RED_ZONE: usize = 128 * 1024;
const STACK_CHUNK: usize = 4 * 1024 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Lex,
    Syntax,
    Runtime,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Lex => "lexical error",
            Phase::Syntax => "syntax error",
            Phase::Runtime => "runtime error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {phase}: {message}")]
pub struct KispError {
    pub phase: Phase,
    pub pos: Pos,
    pub message: String,
}

impl KispError {
    pub fn new(phase: Phase, pos: Pos, message: impl Into<String>) -> Self {
        KispError {
            phase,
            pos,
            message: message.into(),
        }
    }
}

/// Tokenizes and parses a whole source text.
pub fn parse_program(src: &str) -> Result<Vec<Expr>, KispError> {
    parser::parse(lexer::tokenize(src)?)
}

pub struct Interpreter {
    tree: Arc<TraditionalTree>,
    timeline: Timeline,
    global: Env,
    people: Value,
    depth: usize,
    max_depth: usize,
}

impl Interpreter {
    pub fn new(tree: Arc<TraditionalTree>, timeline: Timeline) -> Self {
        let global = Scope::root();
        for b in BUILTINS {
            global.define(b.name, Value::Builtin(b));
        }
        let people = Value::list(tree.indices().map(Value::Person).collect());
        let mut interp = Interpreter {
            tree,
            timeline,
            global,
            people,
            depth: 0,
            max_depth: DEFAULT_MAX_DEPTH,
        };
        for expr in parse_program(PRELUDE).expect("prelude parses") {
            interp.eval_top(&expr).expect("prelude evaluates");
        }
        interp
    }

    /// An interpreter over an empty tree, for queries that need no genealogy.
    pub fn standalone(timeline: Timeline) -> Self {
        let empty = FamilyTree::new(Vec::new(), Vec::new()).expect("empty tree is well-formed");
        let tree = TraditionalTree::new(empty).expect("empty tree is traditional");
        Interpreter::new(Arc::new(tree), timeline)
    }

    pub fn with_max_depth(mut self, depth: usize) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn tree(&self) -> &TraditionalTree {
        &self.tree
    }

    pub fn timeline(&self) -> Timeline {
        self.timeline
    }

    /// Binds `ego` (or any other name) to the person with the given id.
    pub fn bind_person(&mut self, name: &str, id: &str) -> Option<()> {
        let p = self.tree.lookup(id)?;
        self.global.define(name, Value::Person(p));
        Some(())
    }

    pub fn lookup_global(&self, name: &str) -> Option<Value> {
        self.global.lookup(name)
    }

    pub fn format(&self, v: &Value) -> String {
        v.display(&self.tree).to_string()
    }

    /// Evaluates a top-level expression. A failing form leaves the global
    /// scope as it was.
    pub fn eval_top(&mut self, expr: &Expr) -> Result<Value, KispError> {
        self.depth = 0;
        let global = self.global.clone();
        self.eval(expr, &global)
    }

    /// Parses and evaluates every form in `src`, returning one value per form.
    pub fn eval_source(&mut self, src: &str) -> Result<Vec<Value>, KispError> {
        let exprs = parse_program(src)?;
        exprs.iter().map(|e| self.eval_top(e)).collect()
    }

    /// Runs a script, printing the value of every top-level form that is not a
    /// definition. Stops at the first error.
    pub fn run_script<W: Write>(&mut self, src: &str, out: &mut W) -> Result<(), ScriptError> {
        let exprs = parse_program(src)?;
        for e in &exprs {
            let v = self.eval_top(e)?;
            if !matches!(e.kind, ExprKind::Define(..)) {
                writeln!(out, "{}", self.format(&v))?;
            }
        }
        Ok(())
    }

    fn eval(&mut self, expr: &Expr, env: &Env) -> Result<Value, KispError> {
        stacker::maybe_grow(RED_ZONE, STACK_CHUNK, || self.eval_inner(expr, env))
    }

    fn eval_inner(&mut self, expr: &Expr, env: &Env) -> Result<Value, KispError> {
        match &expr.kind {
            ExprKind::Literal(lit) => Ok(match lit {
                Literal::Num(n) => Value::Num(n.clone()),
                Literal::Text(s) => Value::Text(s.clone()),
                Literal::Bool(b) => Value::Bool(*b),
                Literal::Void => Value::Void,
                Literal::Vacant => Value::vacant(),
                Literal::People => self.people.clone(),
                Literal::Now => Value::Date(self.timeline.now),
            }),
            ExprKind::Reference(name) => env.lookup(name).ok_or_else(|| {
                KispError::new(
                    Phase::Runtime,
                    expr.pos,
                    format!("unbound reference `{name}`"),
                )
            }),
            ExprKind::Lambda(lambda) => Ok(Value::Closure(Rc::new(Closure {
                lambda: lambda.clone(),
                env: env.clone(),
            }))),
            ExprKind::Define(name, value) => {
                let v = self.eval(value, env)?;
                self.global.define(name, v);
                Ok(Value::Void)
            }
            ExprKind::If(cond, then, otherwise) => match self.eval(cond, env)? {
                Value::Bool(true) => self.eval(then, env),
                Value::Bool(false) => self.eval(otherwise, env),
                other => Err(KispError::new(
                    Phase::Runtime,
                    cond.pos,
                    format!(
                        "`if` condition must be a boolean, got {}",
                        other.type_name()
                    ),
                )),
            },
            ExprKind::And(args) => self.short_circuit(args, env, false),
            ExprKind::Or(args) => self.short_circuit(args, env, true),
            ExprKind::Application(head, args) => {
                let f = self.eval(head, env)?;
                let args = args
                    .iter()
                    .map(|a| self.eval(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                self.apply(&f, &args, expr.pos)
            }
        }
    }

    /// `and` stops at the first false, `or` at the first true.
    fn short_circuit(
        &mut self,
        args: &[Expr],
        env: &Env,
        stop_on: bool,
    ) -> Result<Value, KispError> {
        for a in args {
            match self.eval(a, env)? {
                Value::Bool(b) if b == stop_on => return Ok(Value::Bool(stop_on)),
                Value::Bool(_) => {}
                other => {
                    return Err(KispError::new(
                        Phase::Runtime,
                        a.pos,
                        format!(
                            "`{}` operands must be booleans, got {}",
                            if stop_on { "or" } else { "and" },
                            other.type_name()
                        ),
                    ))
                }
            }
        }
        Ok(Value::Bool(!stop_on))
    }

    pub fn apply(
        &mut self,
        f: &Value,
        args: &[Value],
        pos: crate::interp::Pos,
    ) -> Result<Value, KispError> {
        if self.depth >= self.max_depth {
            return Err(KispError::new(
                Phase::Runtime,
                pos,
                "maximum call depth exceeded",
            ));
        }
        self.depth += 1;
        let result = match f {
            Value::Builtin(b) => b.call(self, args, pos),
            Value::Closure(c) => {
                let params = &c.lambda.params;
                if params.len() != args.len() {
                    Err(KispError::new(
                        Phase::Runtime,
                        pos,
                        format!(
                            "function expects {} argument(s), got {}",
                            params.len(),
                            args.len()
                        ),
                    ))
                } else {
                    let scope =
                        Scope::child(&c.env, params.iter().cloned().zip(args.iter().cloned()));
                    self.eval(&c.lambda.body, &scope)
                }
            }
            other => Err(KispError::new(
                Phase::Runtime,
                pos,
                format!("cannot apply a {}", other.type_name()),
            )),
        };
        self.depth -= 1;
        result
    }
}

#[derive(Debug, Error)]
pub enum ScriptError {
    #[error(transparent)]
    Kisp(#[from] KispError),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}
