//! Deterministic textual export of a model in the common LP file layout:
//! `Maximize / obj: ...; Subject To / c{n}: ...; Binaries / ...; End`.
//!
//! Output is byte-stable across runs: variables appear in index order,
//! constraints in model order, and sums wrap after a fixed number of
//! terms. Coefficients and right-hand sides must be integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{domain, Result};

use super::{LpModel, Relation};

const TERMS_PER_LINE: usize = 10;

fn integer_of(x: &BigRational, place: &str) -> Result<BigInt> {
    if !x.is_integer() {
        return Err(domain(format!(
            "LP export needs integer coefficients; found {x} in {place}"
        )));
    }
    Ok(x.to_integer())
}

fn write_sum(out: &mut String, terms: &[(String, BigInt)], indent: &str) {
    for (i, (name, coeff)) in terms.iter().enumerate() {
        if i > 0 {
            if i % TERMS_PER_LINE == 0 {
                out.push('\n');
                out.push_str(indent);
            }
            if coeff.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
        } else if coeff.is_negative() {
            out.push_str("- ");
        }
        let abs = coeff.magnitude();
        if !abs.is_one() {
            out.push_str(&abs.to_string());
            out.push(' ');
        }
        out.push_str(name);
    }
}

/// Renders the model; identical models produce identical bytes.
pub fn export_lp(model: &LpModel) -> Result<String> {
    let mut out = String::new();
    out.push_str("Maximize\n obj: ");
    let obj_terms: Vec<(String, BigInt)> = model
        .objective
        .iter()
        .map(|&(j, ref c)| Ok((model.vars[j].name.clone(), integer_of(c, "objective")?)))
        .collect::<Result<_>>()?;
    write_sum(&mut out, &obj_terms, "      ");
    out.push_str("\nSubject To\n");
    for c in &model.constraints {
        out.push(' ');
        out.push_str(&c.name);
        out.push_str(": ");
        let terms: Vec<(String, BigInt)> = c
            .terms
            .iter()
            .map(|&(j, ref a)| Ok((model.vars[j].name.clone(), integer_of(a, &c.name)?)))
            .collect::<Result<_>>()?;
        let indent = " ".repeat(c.name.len() + 3);
        write_sum(&mut out, &terms, &indent);
        let rel = match c.relation {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        };
        out.push_str(&format!(" {rel} {}\n", integer_of(&c.rhs, &c.name)?));
    }
    let binaries: Vec<&str> = model
        .vars
        .iter()
        .filter(|v| v.binary)
        .map(|v| v.name.as_str())
        .collect();
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        for chunk in binaries.chunks(TERMS_PER_LINE) {
            out.push(' ');
            out.push_str(&chunk.join(" "));
            out.push('\n');
        }
    }
    out.push_str("End\n");
    Ok(out)
}
