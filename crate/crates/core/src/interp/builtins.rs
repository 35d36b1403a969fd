use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::value::Value;
use super::{Interpreter, KispError, Phase, Pos};
use crate::family::PersonIdx;
use crate::kin_term::BasicKin;
use crate::temporal::{self, TimePoint};

#[derive(Debug, Clone, Copy)]
pub enum Arity {
    Exact(usize),
    AtLeast(usize),
}

impl Arity {
    fn accepts(self, n: usize) -> bool {
        match self {
            Arity::Exact(k) => n == k,
            Arity::AtLeast(k) => n >= k,
        }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arity::Exact(k) => write!(f, "{k}"),
            Arity::AtLeast(k) => write!(f, "at least {k}"),
        }
    }
}

type NativeFn = fn(&mut Interpreter, &[Value], Pos) -> Result<Value, KispError>;

pub struct Builtin {
    pub name: &'static str,
    pub arity: Arity,
    func: NativeFn,
}

impl fmt::Debug for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Builtin({})", self.name)
    }
}

impl Builtin {
    pub fn call(
        &self,
        interp: &mut Interpreter,
        args: &[Value],
        pos: Pos,
    ) -> Result<Value, KispError> {
        if !self.arity.accepts(args.len()) {
            return Err(KispError::new(
                Phase::Runtime,
                pos,
                format!(
                    "`{}` expects {} argument(s), got {}",
                    self.name,
                    self.arity,
                    args.len()
                ),
            ));
        }
        (self.func)(interp, args, pos)
    }
}

macro_rules! builtin {
    ($name:expr, $arity:expr, $f:expr) => {
        Builtin {
            name: $name,
            arity: $arity,
            func: $f,
        }
    };
}

use Arity::*;

pub static BUILTINS: &[Builtin] = &[
    builtin!("+", AtLeast(0), |_, a, p| Ok(Value::Num(
        nums(a, p, "+")?.into_iter().sum()
    ))),
    builtin!("*", AtLeast(0), |_, a, p| Ok(Value::Num(
        nums(a, p, "*")?.into_iter().product()
    ))),
    builtin!("-", AtLeast(1), minus),
    builtin!("inc", Exact(1), |_, a, p| Ok(Value::Num(
        num(&a[0], p, "inc")? + BigInt::one()
    ))),
    builtin!("dec", Exact(1), |_, a, p| Ok(Value::Num(
        num(&a[0], p, "dec")? - BigInt::one()
    ))),
    builtin!("abs", Exact(1), |_, a, p| Ok(Value::Num(
        num(&a[0], p, "abs")?.abs()
    ))),
    builtin!("<", Exact(2), |_, a, p| compare(a, p, "<", |o| o.is_lt())),
    builtin!(">", Exact(2), |_, a, p| compare(a, p, ">", |o| o.is_gt())),
    builtin!("<=", Exact(2), |_, a, p| compare(a, p, "<=", |o| o.is_le())),
    builtin!(">=", Exact(2), |_, a, p| compare(a, p, ">=", |o| o.is_ge())),
    builtin!("=", Exact(2), |_, a, _| Ok(Value::Bool(
        a[0].structural_eq(&a[1])
    ))),
    builtin!("not", Exact(1), |_, a, p| Ok(Value::Bool(!boolean(
        &a[0], p, "not"
    )?))),
    builtin!("count", Exact(1), |_, a, p| Ok(Value::Num(
        list(&a[0], p, "count")?.len().into()
    ))),
    builtin!("empty?", Exact(1), |_, a, p| Ok(Value::Bool(
        list(&a[0], p, "empty?")?.is_empty()
    ))),
    builtin!("first", Exact(1), first),
    builtin!("rest", Exact(1), |_, a, p| Ok(Value::list(
        list(&a[0], p, "rest")?.iter().skip(1).cloned().collect()
    ))),
    builtin!("list", AtLeast(0), |_, a, _| Ok(Value::list(a.to_vec()))),
    builtin!("append", Exact(2), |_, a, p| {
        let mut items = list(&a[0], p, "append")?.to_vec();
        items.push(a[1].clone());
        Ok(Value::list(items))
    }),
    builtin!("concat", AtLeast(0), concat),
    builtin!("join", AtLeast(0), join),
    builtin!("filter", Exact(2), filter),
    builtin!("map", Exact(2), map),
    builtin!("father", Exact(1), |i, a, p| kin(
        i,
        &a[0],
        p,
        "father",
        Kin::Basic(BasicKin::Father)
    )),
    builtin!("mother", Exact(1), |i, a, p| kin(
        i,
        &a[0],
        p,
        "mother",
        Kin::Basic(BasicKin::Mother)
    )),
    builtin!("son", Exact(1), |i, a, p| kin(
        i,
        &a[0],
        p,
        "son",
        Kin::Basic(BasicKin::Son)
    )),
    builtin!("daughter", Exact(1), |i, a, p| kin(
        i,
        &a[0],
        p,
        "daughter",
        Kin::Basic(BasicKin::Daughter)
    )),
    builtin!("husband", Exact(1), |i, a, p| kin(
        i,
        &a[0],
        p,
        "husband",
        Kin::Basic(BasicKin::Husband)
    )),
    builtin!("wife", Exact(1), |i, a, p| kin(
        i,
        &a[0],
        p,
        "wife",
        Kin::Basic(BasicKin::Wife)
    )),
    builtin!("children", Exact(1), |i, a, p| kin(
        i,
        &a[0],
        p,
        "children",
        Kin::Children
    )),
    builtin!("spouse", Exact(1), |i, a, p| kin(
        i,
        &a[0],
        p,
        "spouse",
        Kin::Spouse
    )),
    builtin!("attr", Exact(2), attr),
    builtin!("date", Exact(1), |_, a, p| {
        let s = text(&a[0], p, "date")?;
        s.parse::<TimePoint>()
            .map(Value::Date)
            .map_err(|e| KispError::new(Phase::Runtime, p, e.to_string()))
    }),
    builtin!("before", Exact(2), |_, a, p| {
        Ok(Value::Bool(temporal::before(
            date(&a[0], p, "before")?,
            date(&a[1], p, "before")?,
        )))
    }),
    builtin!("after", Exact(2), |_, a, p| {
        Ok(Value::Bool(temporal::after(
            date(&a[0], p, "after")?,
            date(&a[1], p, "after")?,
        )))
    }),
    builtin!("during", Exact(3), |_, a, p| {
        let (x, s, f) = (
            date(&a[0], p, "during")?,
            date(&a[1], p, "during")?,
            date(&a[2], p, "during")?,
        );
        Ok(Value::Bool(temporal::during(x, s, f)))
    }),
    builtin!("past", Exact(1), |i, a, p| Ok(Value::Bool(
        i.timeline().past(date(&a[0], p, "past")?)
    ))),
    builtin!("future", Exact(1), |i, a, p| Ok(Value::Bool(
        i.timeline().future(date(&a[0], p, "future")?)
    ))),
];

fn type_error(pos: Pos, name: &str, expected: &str, got: &Value) -> KispError {
    KispError::new(
        Phase::Runtime,
        pos,
        format!("`{name}` expects {expected}, got {}", got.type_name()),
    )
}

fn num<'a>(v: &'a Value, pos: Pos, name: &str) -> Result<&'a BigInt, KispError> {
    match v {
        Value::Num(n) => Ok(n),
        other => Err(type_error(pos, name, "a numeral", other)),
    }
}

fn nums(args: &[Value], pos: Pos, name: &str) -> Result<Vec<BigInt>, KispError> {
    args.iter().map(|v| num(v, pos, name).cloned()).collect()
}

fn boolean(v: &Value, pos: Pos, name: &str) -> Result<bool, KispError> {
    match v {
        Value::Bool(b) => Ok(*b),
        other => Err(type_error(pos, name, "a boolean", other)),
    }
}

fn list<'a>(v: &'a Value, pos: Pos, name: &str) -> Result<&'a [Value], KispError> {
    match v {
        Value::List(items) => Ok(items),
        other => Err(type_error(pos, name, "a list", other)),
    }
}

fn text<'a>(v: &'a Value, pos: Pos, name: &str) -> Result<&'a str, KispError> {
    match v {
        Value::Text(s) => Ok(s),
        other => Err(type_error(pos, name, "a string", other)),
    }
}

fn date(v: &Value, pos: Pos, name: &str) -> Result<TimePoint, KispError> {
    match v {
        Value::Date(d) => Ok(*d),
        other => Err(type_error(pos, name, "a date", other)),
    }
}

fn minus(_: &mut Interpreter, args: &[Value], pos: Pos) -> Result<Value, KispError> {
    let first = num(&args[0], pos, "-")?;
    if args.len() == 1 {
        return Ok(Value::Num(-first));
    }
    let rest: BigInt = nums(&args[1..], pos, "-")?.into_iter().sum();
    Ok(Value::Num(first - rest))
}

fn compare(
    args: &[Value],
    pos: Pos,
    name: &str,
    test: fn(std::cmp::Ordering) -> bool,
) -> Result<Value, KispError> {
    let ord = match (&args[0], &args[1]) {
        (Value::Num(a), Value::Num(b)) => a.cmp(b),
        (Value::Date(a), Value::Date(b)) => a.cmp(b),
        (Value::Num(_) | Value::Date(_), other) | (other, _) => {
            return Err(type_error(pos, name, "two numerals or two dates", other))
        }
    };
    Ok(Value::Bool(test(ord)))
}

fn first(_: &mut Interpreter, args: &[Value], pos: Pos) -> Result<Value, KispError> {
    list(&args[0], pos, "first")?
        .first()
        .cloned()
        .ok_or_else(|| KispError::new(Phase::Runtime, pos, "`first` of an empty list"))
}

fn concat(_: &mut Interpreter, args: &[Value], pos: Pos) -> Result<Value, KispError> {
    if args.iter().all(|v| matches!(v, Value::Text(_))) && !args.is_empty() {
        let s: String = args
            .iter()
            .map(|v| text(v, pos, "concat"))
            .collect::<Result<_, _>>()?;
        return Ok(Value::Text(s.into()));
    }
    let mut out = Vec::new();
    for v in args {
        out.extend(list(v, pos, "concat")?.iter().cloned());
    }
    Ok(Value::list(out))
}

/// Union of lists and single values, flattened one level. Keeps the first
/// occurrence of each element.
fn join(_: &mut Interpreter, args: &[Value], _: Pos) -> Result<Value, KispError> {
    let mut out: Vec<Value> = Vec::new();
    let mut push = |v: &Value| {
        if !out.iter().any(|o| o.structural_eq(v)) {
            out.push(v.clone());
        }
    };
    for v in args {
        match v {
            Value::List(items) => items.iter().for_each(&mut push),
            Value::Void => {}
            other => push(other),
        }
    }
    Ok(Value::list(out))
}

fn filter(interp: &mut Interpreter, args: &[Value], pos: Pos) -> Result<Value, KispError> {
    let items = list(&args[1], pos, "filter")?;
    let mut out = Vec::new();
    for item in items {
        let keep = interp.apply(&args[0], std::slice::from_ref(item), pos)?;
        if boolean(&keep, pos, "filter predicate")? {
            out.push(item.clone());
        }
    }
    Ok(Value::list(out))
}

fn map(interp: &mut Interpreter, args: &[Value], pos: Pos) -> Result<Value, KispError> {
    let items = list(&args[1], pos, "map")?;
    let out = items
        .iter()
        .map(|item| interp.apply(&args[0], std::slice::from_ref(item), pos))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Value::list(out))
}

enum Kin {
    Basic(BasicKin),
    Children,
    Spouse,
}

fn persons(v: &Value, pos: Pos, name: &str) -> Result<Vec<PersonIdx>, KispError> {
    match v {
        Value::Person(p) => Ok(vec![*p]),
        Value::List(items) => items
            .iter()
            .map(|x| match x {
                Value::Person(p) => Ok(*p),
                other => Err(type_error(
                    pos,
                    name,
                    "a person or a list of persons",
                    other,
                )),
            })
            .collect(),
        other => Err(type_error(
            pos,
            name,
            "a person or a list of persons",
            other,
        )),
    }
}

/// Kinship accessors are lifted to lists: the result is the union over every
/// input person, in tree order.
fn kin(
    interp: &mut Interpreter,
    arg: &Value,
    pos: Pos,
    name: &str,
    which: Kin,
) -> Result<Value, KispError> {
    let tree = interp.tree();
    let mut out = BTreeSet::new();
    for p in persons(arg, pos, name)? {
        match which {
            Kin::Basic(k) => out.extend(tree.basic_kin(k, p)),
            Kin::Children => out.extend(tree.children(p)),
            Kin::Spouse => out.extend(tree.spouses(p)),
        }
    }
    Ok(Value::list(out.into_iter().map(Value::Person).collect()))
}

fn attr(interp: &mut Interpreter, args: &[Value], pos: Pos) -> Result<Value, KispError> {
    let p = match &args[0] {
        Value::Person(p) => *p,
        other => return Err(type_error(pos, "attr", "a person", other)),
    };
    let person = interp.tree().person(p);
    Ok(match text(&args[1], pos, "attr")? {
        "id" => Value::Text(person.id.as_str().into()),
        "name" => Value::Text(person.name.as_str().into()),
        "sex" => Value::Text(person.sex.as_str().into()),
        "birthdate" => Value::Date(person.birthdate),
        "birthplace" => person
            .birthplace
            .as_deref()
            .map_or(Value::Void, |s| Value::Text(s.into())),
        other => {
            return Err(KispError::new(
                Phase::Runtime,
                pos,
                format!("unknown attribute `{other}`"),
            ));
        }
    })
}
