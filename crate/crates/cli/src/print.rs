//! Printers for the three file formats and for exact rationals.
//!
//! Formulas and AM elements already render in the surface syntax via
//! their `Display` implementations, so the printers here only assemble
//! whole files and format numbers. `parse(print(x))` reproduces `x`
//! for every file kind.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use ppredelp::lang::{AmElement, ElementId, Formula};

use crate::parse::EmFile;

/// Renders a rational exactly: as a terminating decimal when the
/// reduced denominator divides a power of ten (`9/20` prints as
/// `0.45`), as `numer/denom` otherwise.
pub fn rational(r: &BigRational) -> String {
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut d = r.denom().clone();
    let mut twos = 0usize;
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    let mut fives = 0usize;
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if d != BigInt::from(1) {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let k = twos.max(fives);
    let mut n = r.numer().clone();
    for _ in 0..(k - twos) {
        n *= &two;
    }
    for _ in 0..(k - fives) {
        n *= &five;
    }
    let sign = if n.is_negative() { "-" } else { "" };
    let mut digits = n.abs().to_string();
    if k == 0 {
        return format!("{sign}{digits}");
    }
    if digits.len() <= k {
        digits = format!("{}{digits}", "0".repeat(k + 1 - digits.len()));
    }
    let split = digits.len() - k;
    format!("{sign}{}.{}", &digits[..split], &digits[split..])
}

/// A six-decimal approximation, for reading next to the exact value.
pub fn decimal6(r: &BigRational) -> String {
    format!("{:.6}", r.to_f64().unwrap_or(f64::NAN))
}

/// Exact value followed by its approximation: `17/20 (0.850000)`.
pub fn rational_with_approx(r: &BigRational) -> String {
    format!("{} ({})", rational(r), decimal6(r))
}

/// Prints an EM file that `parse_em` maps back to the same contents.
pub fn print_em(file: &EmFile) -> String {
    let mut out = String::new();
    for st in &file.statements {
        let _ = writeln!(out, "{} : {} +- {}.", st.formula, rational(&st.p), rational(&st.eps));
    }
    for oo in &file.one_ofs {
        let names: Vec<String> = oo.atoms.iter().map(|a| a.to_string()).collect();
        let _ = writeln!(out, "oneOf{{{}}}.", names.join(", "));
    }
    out
}

/// Prints an AM file, one element per line.
pub fn print_am(elements: &[AmElement]) -> String {
    let mut out = String::new();
    for e in elements {
        let _ = writeln!(out, "{e}");
    }
    out
}

/// Prints an annotation-function file, one `label : formula.` entry
/// per line.
pub fn print_af<'a, I>(entries: I) -> String
where
    I: IntoIterator<Item = (&'a ElementId, &'a Formula)>,
{
    let mut out = String::new();
    for (label, formula) in entries {
        let _ = writeln!(out, "{label} : {formula}.");
    }
    out
}
