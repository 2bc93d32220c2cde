//! The ImgQL script language.
//!
//! A script is parsed into commands, then every `save` and `print` target
//! is expanded into a closed expression: `let` definitions are inlined and
//! structurally equal subexpressions are hash-consed into one node of an
//! [`ExprGraph`]. Node ids are contiguous and every node's arguments have
//! smaller ids, so id order is a topological order. Types are checked while
//! the graph is built; evaluation runs each node exactly once, in parallel
//! where dependencies allow.

mod builtins;
mod error;
mod eval;
mod graph;
mod lexer;
mod parser;
mod types;
mod vars;

pub use builtins::{builtin_table, Builtin, Prim};
pub use error::{ErrorKind, Location, ScriptError};
pub use eval::{EvalOptions, Evaluation, Event, RunReport, Value};
pub use graph::{ExprGraph, ImportResolver, Node, NodeId, NodeOp, Program};
pub use lexer::{tokenize, Tok, Token};
pub use parser::{parse, parse_source, Command, Expr, ExprKind};
pub use types::TypeTag;
pub use vars::{substitute_vars, Bindings};

/// `%g`-style formatting with six significant digits.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    // rounding can carry into the next decade
    let rounded: f64 = format!("{:.5e}", v).parse().unwrap_or(v);
    let exp = if rounded.abs() >= 10f64.powi(exp + 1) { exp + 1 } else { exp };
    if !(-4..6).contains(&exp) {
        let s = format!("{:.5e}", v);
        let (mantissa, e) = s.split_once('e').unwrap_or((&s, "0"));
        let e: i32 = e.parse().unwrap_or(0);
        let sign = if e < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, e.abs())
    } else {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::format_number;

    #[test]
    fn six_significant_digits() {
        assert_eq!(format_number(0.5), "0.5");
        assert_eq!(format_number(1.0 / 3.0), "0.333333");
        assert_eq!(format_number(3578.0), "3578");
        assert_eq!(format_number(123456.7), "123457");
        assert_eq!(format_number(1234567.0), "1.23457e+06");
        assert_eq!(format_number(0.0001234), "0.0001234");
        assert_eq!(format_number(0.00001234), "1.234e-05");
        assert_eq!(format_number(-2.5), "-2.5");
        assert_eq!(format_number(999999.6), "1e+06");
        assert_eq!(format_number(f64::INFINITY), "inf");
        assert_eq!(format_number(0.0), "0");
    }
}
