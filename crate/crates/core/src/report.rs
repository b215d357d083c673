//! JSON documents for certificates, traces and matrix-polynomial results.
//! Rationals are written as `"num/den"` strings and polynomials in the text
//! grammar, so every document reads back exactly.

use serde_json::{json, Value};

use crate::linalg::Ldl;
use crate::matpoly::{ERadical, SmithForm, UniPoly, UniPolyMatrix};
use crate::ncpoly::{NCPoly, Word};
use crate::parse::{parse_poly, print_poly};
use crate::psdfeas::PsdCertificate;
use crate::qmat::QMat;
use crate::rational::{from_wire, to_wire, Rational};
use crate::realrad::{AlphaAnswer, AlphaTier, RealRadical, RealRadicalTrace, RoundMethod, RoundRecord};

pub fn rational(q: &Rational) -> Value {
    Value::String(to_wire(q))
}

pub fn vector(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

pub fn matrix(m: &QMat) -> Value {
    Value::Array((0..m.rows()).map(|i| vector(m.row(i))).collect())
}

pub fn poly(p: &NCPoly) -> Value {
    Value::String(print_poly(p))
}

pub fn polys(ps: &[NCPoly]) -> Value {
    Value::Array(ps.iter().map(poly).collect())
}

fn word(w: &Word) -> Value {
    poly(&NCPoly::word(w.clone()))
}

pub fn ldl(l: &Ldl) -> Value {
    json!({
        "perm": l.perm,
        "d": vector(&l.d),
        "l": l.l.iter().map(|c| vector(c)).collect::<Vec<_>>(),
    })
}

pub fn certificate(c: &PsdCertificate) -> Value {
    match c {
        PsdCertificate::Feasible(f) => json!({
            "kind": "feasible",
            "alpha": vector(&f.alpha),
            "b": matrix(&f.b),
            "ldl": ldl(&f.ldl),
            "rows": f.rows.iter().map(|r| vector(r)).collect::<Vec<_>>(),
            "pivots": vector(&f.pivots),
        }),
        PsdCertificate::Infeasible(i) => json!({
            "kind": "infeasible",
            "w": matrix(&i.w),
            "ldl_pd": ldl(&i.ldl_pd),
        }),
    }
}

pub fn round(r: &RoundRecord) -> Value {
    json!({
        "k": r.k,
        "g": r.g,
        "generators": polys(&r.generators),
        "degree": r.degree,
        "dim_low": r.dim_low,
        "method": match r.method {
            RoundMethod::Shortcut => "shortcut",
            RoundMethod::Full => "full",
        },
        "words": r.words.iter().map(word).collect::<Vec<_>>(),
        "gram": r.gram.iter().map(matrix).collect::<Vec<_>>(),
        "certificate": certificate(&r.certificate),
        "extracted": polys(&r.extracted),
    })
}

pub fn trace(t: &RealRadicalTrace) -> Value {
    Value::Array(t.rounds.iter().map(round).collect())
}

/// Output generators, plus the trace when asked.
pub fn real_radical(rr: &RealRadical, with_trace: bool) -> Value {
    let mut v = json!({
        "g": rr.g,
        "unit": rr.is_unit(),
        "generators": polys(&rr.presentation()),
        "minimal_generators": polys(&rr.minimal_generators().unwrap_or_else(|_| rr.presentation())),
        "rounds": rr.trace.rounds.len(),
    });
    if with_trace {
        v["trace"] = trace(&rr.trace);
    }
    v
}

pub fn alpha(a: &AlphaAnswer) -> Value {
    match a {
        AlphaAnswer::Yes(c) => json!({
            "answer": "yes",
            "reduced": poly(&c.reduced),
            "tier": match c.tier {
                AlphaTier::Member => json!("member"),
                AlphaTier::Generators(t) => json!({ "generators": t }),
                AlphaTier::Full { degree } => json!({ "full": degree }),
            },
            "words": c.words.iter().map(word).collect::<Vec<_>>(),
            "sigma": matrix(&c.sigma),
            "ldl": ldl(&c.ldl),
            "h": poly(&c.h),
        }),
        AlphaAnswer::No { obstruction } => json!({
            "answer": "no",
            "obstruction": poly(obstruction),
        }),
        AlphaAnswer::Unknown => json!({ "answer": "unknown" }),
    }
}

/// Coefficient list, constant term first.
pub fn unipoly(p: &UniPoly) -> Value {
    vector(p.coeffs())
}

pub fn unipoly_matrix(m: &UniPolyMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| unipoly(m.get(i, j))).collect()))
            .collect(),
    )
}

pub fn smith(s: &SmithForm) -> Value {
    json!({
        "u": unipoly_matrix(&s.u),
        "d": unipoly_matrix(&s.d),
        "v": unipoly_matrix(&s.v),
        "diagonal": s.diagonal().iter().map(unipoly).collect::<Vec<_>>(),
    })
}

pub fn eradical(e: &ERadical) -> Value {
    json!({
        "generator": unipoly_matrix(&e.generator),
        "hermite": unipoly_matrix(&e.canonical_generator()),
        "radicals": e.radicals.iter().map(unipoly).collect::<Vec<_>>(),
        "smith": smith(&e.smith),
    })
}

// ---------------------------------------------------------------------------
// reading back

pub fn read_rational(v: &Value) -> Option<Rational> {
    from_wire(v.as_str()?)
}

pub fn read_vector(v: &Value) -> Option<Vec<Rational>> {
    v.as_array()?.iter().map(read_rational).collect()
}

pub fn read_matrix(v: &Value) -> Option<QMat> {
    let rows: Vec<Vec<Rational>> = v.as_array()?.iter().map(read_vector).collect::<Option<_>>()?;
    if rows.is_empty() {
        return Some(QMat::zeros(0, 0));
    }
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return None;
    }
    Some(QMat::from_rows(rows))
}

pub fn read_poly(v: &Value) -> Option<NCPoly> {
    parse_poly(v.as_str()?).ok()
}

pub fn read_unipoly(v: &Value) -> Option<UniPoly> {
    Some(UniPoly::from_coeffs(read_vector(v)?))
}

pub fn read_unipoly_matrix(v: &Value) -> Option<UniPolyMatrix> {
    let rows: Vec<Vec<UniPoly>> = v
        .as_array()?
        .iter()
        .map(|r| r.as_array()?.iter().map(read_unipoly).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return None;
    }
    Some(UniPolyMatrix::from_rows(rows))
}
