use std::fmt;

use serde::{Deserialize, Serialize};

use crate::compiler::fmt_num;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Arg {
    Ident(String),
    Number(f64),
    List(Vec<Arg>),
    /// `b1=0` inside a compare list.
    Pair(String, f64),
    /// `bob[b1, b2]`: actions attributed to a player.
    Tagged(String, Vec<Arg>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Call {
    pub name: String,
    pub args: Vec<Arg>,
}

impl Call {
    pub fn new(name: impl Into<String>, args: Vec<Arg>) -> Self {
        Self { name: name.into(), args }
    }
}

pub fn ident(s: impl Into<String>) -> Arg {
    Arg::Ident(s.into())
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Arg]) -> fmt::Result {
    f.write_str("[")?;
    for (i, a) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str("]")
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Ident(s) => f.write_str(s),
            Arg::Number(x) => f.write_str(&fmt_num(*x)),
            Arg::List(items) => write_list(f, items),
            Arg::Pair(k, v) => write!(f, "{k}={}", fmt_num(*v)),
            Arg::Tagged(tag, items) => {
                f.write_str(tag)?;
                write_list(f, items)
            }
        }
    }
}

/// Canonical form: `search(Bob, Gopher, max, b1)`, `mean([7, 3])`.
impl fmt::Display for Call {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// Result of a tool call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Value {
    Number(f64),
    /// Best actions, in action order.
    Actions(Vec<String>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(x) => f.write_str(&fmt_num(*x)),
            Value::Actions(a) => write!(f, "[{}]", a.join(",")),
        }
    }
}
