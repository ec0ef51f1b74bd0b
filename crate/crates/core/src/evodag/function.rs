use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Function {
    Add,
    Atan,
    NearestCentroid,
    Abs,
    Hypot,
    Max,
    Min,
    Mul,
    GaussianNb,
    MultinomialNb,
    Sin,
    Sqrt,
    Tan,
    Tanh,
}

impl Function {
    pub const ALL: [Function; 14] = [
        Function::Add,
        Function::Atan,
        Function::NearestCentroid,
        Function::Abs,
        Function::Hypot,
        Function::Max,
        Function::Min,
        Function::Mul,
        Function::GaussianNb,
        Function::MultinomialNb,
        Function::Sin,
        Function::Sqrt,
        Function::Tan,
        Function::Tanh,
    ];

    pub fn default_arity(self) -> usize {
        match self {
            Function::Add => 60,
            Function::Mul => 20,
            Function::Max | Function::Min => 5,
            Function::Hypot => 2,
            Function::NearestCentroid => 2,
            Function::GaussianNb | Function::MultinomialNb => 5,
            Function::Atan | Function::Abs | Function::Sin | Function::Sqrt | Function::Tan | Function::Tanh => 1,
        }
    }

    /// `f(a, b, b, d) = θ f(a, b, d)`: repeating an argument adds nothing.
    pub fn unique_args(self) -> bool {
        matches!(
            self,
            Function::Add
                | Function::Max
                | Function::Min
                | Function::NearestCentroid
                | Function::GaussianNb
                | Function::MultinomialNb
        )
    }

    pub fn commutative(self) -> bool {
        !self.is_unary()
    }

    pub fn is_unary(self) -> bool {
        self.default_arity() == 1
    }

    pub fn is_classifier(self) -> bool {
        matches!(self, Function::NearestCentroid | Function::GaussianNb | Function::MultinomialNb)
    }

    pub fn name(self) -> &'static str {
        match self {
            Function::Add => "Add",
            Function::Atan => "Atan",
            Function::NearestCentroid => "NearestCentroid",
            Function::Abs => "Abs",
            Function::Hypot => "Hypot",
            Function::Max => "Max",
            Function::Min => "Min",
            Function::Mul => "Mul",
            Function::GaussianNb => "GaussianNB",
            Function::MultinomialNb => "MultinomialNB",
            Function::Sin => "Sin",
            Function::Sqrt => "Sqrt",
            Function::Tan => "Tan",
            Function::Tanh => "Tanh",
        }
    }
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A function with its nominal arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub function: Function,
    pub arity: usize,
}

impl FunctionSpec {
    pub fn new(function: Function) -> Self {
        Self { function, arity: function.default_arity() }
    }

    pub fn with_arity(function: Function, arity: usize) -> Self {
        Self { function, arity }
    }

    pub fn commutative(&self) -> bool {
        self.function.commutative()
    }

    pub fn unique_args(&self) -> bool {
        self.function.unique_args()
    }

    /// Arity actually used when only `pool` candidates are available:
    /// clipped to the pool, never below 2 for multi-argument functions.
    pub fn effective_arity(&self, pool: usize) -> usize {
        if self.function.is_unary() {
            1
        } else {
            self.arity.min(pool).max(2)
        }
    }

    pub fn default_set() -> Vec<FunctionSpec> {
        Function::ALL.iter().map(|&f| FunctionSpec::new(f)).collect()
    }
}

/// Elementwise transform of a unary function; `Tan` is clamped and `Sqrt`
/// works on the magnitude.
pub(crate) fn unary(function: Function, v: f64) -> f64 {
    match function {
        Function::Atan => libm::atan(v),
        Function::Abs => libm::fabs(v),
        Function::Sin => libm::sin(v),
        Function::Sqrt => libm::sqrt(libm::fabs(v)),
        Function::Tan => libm::tan(v).clamp(-TAN_CLAMP, TAN_CLAMP),
        Function::Tanh => libm::tanh(v),
        _ => unreachable!("not a unary function"),
    }
}

pub const TAN_CLAMP: f64 = 1e6;
