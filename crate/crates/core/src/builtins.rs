//! Primitive operations over constants.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::ast::{format_call, Constant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Builtin {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Min,
    Max,
    Eq,
    Lt,
    Leq,
    Ite,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BuiltinError {
    #[error("arithmetic error in {call}: {message}")]
    Arithmetic { call: String, message: String },
    #[error("type error in {call}: {message}")]
    Type { call: String, message: String },
    #[error("`{0}` is not a builtin")]
    Unknown(String),
}

impl Builtin {
    pub const ALL: [Builtin; 11] = [
        Builtin::Add,
        Builtin::Sub,
        Builtin::Mul,
        Builtin::Div,
        Builtin::Mod,
        Builtin::Min,
        Builtin::Max,
        Builtin::Eq,
        Builtin::Lt,
        Builtin::Leq,
        Builtin::Ite,
    ];

    /// Looks a builtin up by name or by its infix symbol.
    pub fn from_name(name: &str) -> Option<Builtin> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == name || b.symbol() == Some(name))
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Add => "add",
            Builtin::Sub => "sub",
            Builtin::Mul => "mul",
            Builtin::Div => "div",
            Builtin::Mod => "mod",
            Builtin::Min => "min",
            Builtin::Max => "max",
            Builtin::Eq => "eq",
            Builtin::Lt => "lt",
            Builtin::Leq => "leq",
            Builtin::Ite => "ite",
        }
    }

    pub fn symbol(self) -> Option<&'static str> {
        Some(match self {
            Builtin::Add => "+",
            Builtin::Sub => "-",
            Builtin::Mul => "*",
            Builtin::Eq => "=",
            Builtin::Lt => "<",
            Builtin::Leq => "<=",
            _ => return None,
        })
    }

    pub fn arity(self) -> usize {
        match self {
            Builtin::Ite => 3,
            _ => 2,
        }
    }

    /// Applies the operation to already-evaluated operands.
    ///
    /// Division truncates toward zero and `mod` takes the sign of the
    /// dividend, so `a == div(a, b) * b + mod(a, b)`.
    pub fn apply(self, args: &[Constant]) -> Result<Constant, BuiltinError> {
        let call = || format_call(None, self.name(), args);
        if args.len() != self.arity() {
            return Err(BuiltinError::Type {
                call: call(),
                message: format!("expected {} arguments, got {}", self.arity(), args.len()),
            });
        }
        let ints = || -> Result<(&BigInt, &BigInt), BuiltinError> {
            match (&args[0], &args[1]) {
                (Constant::Int(a), Constant::Int(b)) => Ok((a, b)),
                (a, b) => Err(BuiltinError::Type {
                    call: call(),
                    message: format!("expected integers, got {} and {}", a.kind_name(), b.kind_name()),
                }),
            }
        };
        let nonzero = |b: &BigInt| {
            if b.is_zero() {
                Err(BuiltinError::Arithmetic {
                    call: call(),
                    message: "division by zero".into(),
                })
            } else {
                Ok(())
            }
        };
        Ok(match self {
            Builtin::Add => ints().map(|(a, b)| Constant::Int(a + b))?,
            Builtin::Sub => ints().map(|(a, b)| Constant::Int(a - b))?,
            Builtin::Mul => ints().map(|(a, b)| Constant::Int(a * b))?,
            Builtin::Div => {
                let (a, b) = ints()?;
                nonzero(b)?;
                Constant::Int(a / b)
            }
            Builtin::Mod => {
                let (a, b) = ints()?;
                nonzero(b)?;
                Constant::Int(a % b)
            }
            Builtin::Min => ints().map(|(a, b)| Constant::Int(a.min(b).clone()))?,
            Builtin::Max => ints().map(|(a, b)| Constant::Int(a.max(b).clone()))?,
            Builtin::Eq => Constant::Bool(args[0] == args[1]),
            Builtin::Lt => ints().map(|(a, b)| Constant::Bool(a < b))?,
            Builtin::Leq => ints().map(|(a, b)| Constant::Bool(a <= b))?,
            Builtin::Ite => match &args[0] {
                Constant::Bool(true) => args[1].clone(),
                Constant::Bool(false) => args[2].clone(),
                other => {
                    return Err(BuiltinError::Type {
                        call: call(),
                        message: format!("condition must be boolean, got {}", other.kind_name()),
                    })
                }
            },
        })
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn is_builtin(name: &str) -> bool {
    Builtin::from_name(name).is_some()
}

pub fn apply_builtin(name: &str, args: &[Constant]) -> Result<Constant, BuiltinError> {
    Builtin::from_name(name)
        .ok_or_else(|| BuiltinError::Unknown(name.to_owned()))?
        .apply(args)
}
