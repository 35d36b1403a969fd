use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;

use super::builtins::Builtin;
use super::parser::Lambda;
use crate::family::{FamilyTree, PersonIdx};
use crate::temporal::TimePoint;

#[derive(Debug, Clone)]
pub enum Value {
    Num(BigInt),
    Text(Rc<str>),
    Bool(bool),
    Void,
    List(Rc<Vec<Value>>),
    Person(PersonIdx),
    Date(TimePoint),
    Closure(Rc<Closure>),
    Builtin(&'static Builtin),
}

#[derive(Debug)]
pub struct Closure {
    pub lambda: Rc<Lambda>,
    pub env: Env,
}

impl Value {
    pub fn list(items: Vec<Value>) -> Self {
        Value::List(Rc::new(items))
    }

    pub fn vacant() -> Self {
        Value::list(Vec::new())
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Num(_) => "numeral",
            Value::Text(_) => "string",
            Value::Bool(_) => "boolean",
            Value::Void => "void",
            Value::List(_) => "list",
            Value::Person(_) => "person",
            Value::Date(_) => "date",
            Value::Closure(_) | Value::Builtin(_) => "function",
        }
    }

    /// Structural equality. Values of different types are unequal, except that
    /// `void` equals the empty list: both stand for "nothing there".
    pub fn structural_eq(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Num(a), Value::Num(b)) => a == b,
            (Value::Text(a), Value::Text(b)) => a == b,
            (Value::Bool(a), Value::Bool(b)) => a == b,
            (Value::Void, Value::Void) => true,
            (Value::Void, Value::List(l)) | (Value::List(l), Value::Void) => l.is_empty(),
            (Value::List(a), Value::List(b)) => {
                a.len() == b.len() && a.iter().zip(b.iter()).all(|(x, y)| x.structural_eq(y))
            }
            (Value::Person(a), Value::Person(b)) => a == b,
            (Value::Date(a), Value::Date(b)) => a == b,
            (Value::Closure(a), Value::Closure(b)) => Rc::ptr_eq(a, b),
            (Value::Builtin(a), Value::Builtin(b)) => a.name == b.name,
            _ => false,
        }
    }

    pub fn display<'a>(&'a self, tree: &'a FamilyTree) -> DisplayValue<'a> {
        DisplayValue { value: self, tree }
    }
}

/// Printable form: numerals in decimal, strings quoted, persons by id, dates
/// as DD.MM.YYYY and lists parenthesized.
pub struct DisplayValue<'a> {
    value: &'a Value,
    tree: &'a FamilyTree,
}

impl fmt::Display for DisplayValue<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Value::Num(n) => write!(f, "{n}"),
            Value::Text(s) => write!(f, "'{s}'"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Void => f.write_str("void"),
            Value::List(items) => {
                f.write_str("(")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{}", v.display(self.tree))?;
                }
                f.write_str(")")
            }
            Value::Person(p) => f.write_str(self.tree.id(*p)),
            Value::Date(d) => write!(f, "{d}"),
            Value::Closure(c) => write!(f, "#<lambda/{}>", c.lambda.params.len()),
            Value::Builtin(b) => write!(f, "#<builtin {}>", b.name),
        }
    }
}

/// A lexical scope. Only the global scope is mutated after creation.
#[derive(Debug, Default)]
pub struct Scope {
    vars: RefCell<HashMap<String, Value>>,
    parent: Option<Env>,
}

pub type Env = Rc<Scope>;

impl Scope {
    pub fn root() -> Env {
        Rc::new(Scope::default())
    }

    pub fn child(parent: &Env, bindings: impl IntoIterator<Item = (String, Value)>) -> Env {
        Rc::new(Scope {
            vars: RefCell::new(bindings.into_iter().collect()),
            parent: Some(parent.clone()),
        })
    }

    pub fn lookup(&self, name: &str) -> Option<Value> {
        if let Some(v) = self.vars.borrow().get(name) {
            return Some(v.clone());
        }
        self.parent.as_ref().and_then(|p| p.lookup(name))
    }

    pub fn define(&self, name: &str, value: Value) {
        self.vars.borrow_mut().insert(name.to_string(), value);
    }
}
