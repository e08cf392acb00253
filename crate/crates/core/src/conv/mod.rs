//! Conversion checking. Two interchangeable strategies:
//!
//! - [`syntactic`]: untyped comparison with η for functions only.
//! - [`typed`]: type-directed comparison with η for functions, pairs and Unit.

use std::fmt;

use crate::eval::{quote, Tops, Unfold, Value};
use crate::syntax::{pretty, Lvl, Name, Term};

pub mod syntactic;
pub mod typed;

/// Where comparison failed, before quotation. Cheap to build, so speculative
/// attempts can fail without paying for read-back.
#[derive(Debug, Clone)]
pub(crate) struct Mismatch {
    pub lvl: Lvl,
    pub left: Value,
    pub right: Value,
    pub ty: Option<Value>,
    pub rule: &'static str,
}

pub(crate) type Conv<T = ()> = Result<T, Box<Mismatch>>;

pub(crate) fn mismatch<T>(lvl: Lvl, left: &Value, right: &Value, ty: Option<&Value>, rule: &'static str) -> Conv<T> {
    Err(Box::new(Mismatch { lvl, left: left.clone(), right: right.clone(), ty: ty.cloned(), rule }))
}

/// Conversion failure, with the offending values quoted at the depth where
/// they were compared (top-level references left folded).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvError {
    pub lvl: Lvl,
    pub left: Term,
    pub right: Term,
    pub ty: Option<Term>,
    /// The rule or case that failed.
    pub rule: &'static str,
}

impl Mismatch {
    pub(crate) fn to_error(&self, tops: &Tops) -> Box<ConvError> {
        Box::new(ConvError {
            lvl: self.lvl,
            left: quote(tops, self.lvl, &self.left, Unfold::None),
            right: quote(tops, self.lvl, &self.right, Unfold::None),
            ty: self.ty.as_ref().map(|t| quote(tops, self.lvl, t, Unfold::None)),
            rule: self.rule,
        })
    }
}

impl ConvError {
    /// Renders with the given binder names; fresh variables introduced during
    /// comparison get placeholder names.
    pub fn render(&self, names: &[Name]) -> String {
        let mut names = names.to_vec();
        let start = names.len();
        for i in start..self.lvl.0 {
            names.push(format!("x{i}").into());
        }
        names.truncate(self.lvl.0);
        let mut out = format!(
            "`{}` is not equal to `{}` ({})",
            pretty(&self.left, &names),
            pretty(&self.right, &names),
            self.rule
        );
        if let Some(ty) = &self.ty {
            out.push_str(&format!(" at type `{}`", pretty(ty, &names)));
        }
        out
    }
}

impl fmt::Display for ConvError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

impl std::error::Error for ConvError {}

/// Which of two different top-level heads to unfold first: the later
/// definition, since it can only mention earlier ones.
pub(crate) fn unfold_left_first(left: &Value, right: &Value) -> bool {
    match (left.top_head(), right.top_head()) {
        (Some(a), Some(b)) => a.ordinal >= b.ordinal,
        (Some(_), None) => true,
        _ => false,
    }
}
