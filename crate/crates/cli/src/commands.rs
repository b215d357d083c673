use std::path::Path;

use ncrad_core::linsolve::normalize_ideal_at;
use ncrad_core::matpoly::{eradical_matpoly_capped, smith_normal_form, DEFAULT_DEGREE_CAP};
use ncrad_core::parse::print_unipoly_matrix;
use ncrad_core::realrad::{is_real_with_round, RoundMethod, RoundRecord};
use ncrad_core::{
    alpha_member, beta_consistency, compress_point, print_poly, real_radical, report, AlphaAnswer, NCPoly,
    PsdCertificate, Rational,
};
use serde_json::{json, Value};

use crate::input::{self, Failure, Outcome};
use crate::{Format, Options, EXIT_NO, EXIT_UNKNOWN};

fn emit(o: &Options, doc: Value, text: impl FnOnce() -> String) {
    match o.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&doc).expect("JSON document")),
        Format::Text => print!("{}", text()),
    }
}

fn yes_no(b: bool) -> u8 {
    if b {
        0
    } else {
        EXIT_NO
    }
}

fn vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|q| q.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn round_text(r: &RoundRecord) -> String {
    let method = match r.method {
        RoundMethod::Shortcut => "shortcut",
        RoundMethod::Full => "full",
    };
    let outcome = match r.certificate {
        PsdCertificate::Feasible(_) => "feasible",
        PsdCertificate::Infeasible(_) => "infeasible",
    };
    let mut s = format!(
        "round {}: degree {}, {method}, dim I_{} = {}, {} words, {} Gram matrices, {outcome}\n",
        r.k,
        r.degree,
        r.degree.saturating_sub(1),
        r.dim_low,
        r.words.len(),
        r.gram.len()
    );
    for q in &r.extracted {
        s += &format!("  + {}\n", print_poly(q));
    }
    s
}

pub fn realrad(file: &Path, o: &Options) -> Outcome {
    let gens = input::ideal(file, o.vars)?;
    match real_radical(&gens, &o.config()) {
        Ok(rr) => {
            let minimal = rr.minimal_generators()?;
            emit(o, report::real_radical(&rr, o.trace), || {
                let mut s = String::new();
                if o.trace {
                    for r in &rr.trace.rounds {
                        s += &round_text(r);
                    }
                }
                for p in &minimal {
                    s += &print_poly(p);
                    s.push('\n');
                }
                s
            });
            Ok(0)
        }
        Err(e) => {
            emit(o, json!({ "undecided": e.error.to_string(), "trace": report::trace(&e.trace) }), || {
                e.trace.rounds.iter().map(round_text).collect()
            });
            eprintln!("error: {}", e.error);
            Ok(EXIT_UNKNOWN)
        }
    }
}

pub fn member(file: &Path, q: &str, o: &Options) -> Outcome {
    let gens = input::ideal(file, o.vars)?;
    let q = input::poly(q, o.vars)?;
    let g = gens.iter().chain([&q]).map(NCPoly::max_var).max().unwrap_or(1).max(o.vars.unwrap_or(1));
    let d = gens.iter().filter_map(NCPoly::degree).max().unwrap_or(0);
    let n = normalize_ideal_at(&gens, g, d)?;
    let inside = n.member(&q);
    let nf = n.normal_form(&q);
    emit(o, json!({ "member": inside, "normal_form": report::poly(&nf) }), || {
        if inside {
            "yes\n".into()
        } else {
            format!("no\nnormal form: {}\n", print_poly(&nf))
        }
    });
    Ok(yes_no(inside))
}

pub fn isreal(file: &Path, o: &Options) -> Outcome {
    let gens = input::ideal(file, o.vars)?;
    let (real, round) = is_real_with_round(&gens, &o.config())?;
    let mut doc = json!({ "real": real });
    if o.trace {
        if let Some(r) = &round {
            doc["round"] = report::round(r);
        }
    }
    emit(o, doc, || {
        let mut s = String::from(if real { "yes\n" } else { "no\n" });
        if o.trace {
            s += &round.as_ref().map(round_text).unwrap_or_default();
        }
        s
    });
    Ok(yes_no(real))
}

pub fn alpha(file: &Path, a: &str, o: &Options) -> Outcome {
    let gens = input::ideal(file, o.vars)?;
    let a = input::poly(a, o.vars)?;
    let ans = alpha_member(&a, &gens, o.degree_cap, &o.config())?;
    emit(o, report::alpha(&ans), || match &ans {
        AlphaAnswer::Yes(c) => format!("yes\na* a + σ = {} lies in I + I*\n", print_poly(&c.h)),
        AlphaAnswer::No { obstruction } => format!("no\nobstruction: {}\n", print_poly(obstruction)),
        AlphaAnswer::Unknown => "unknown\n".into(),
    });
    Ok(match ans {
        AlphaAnswer::Yes(_) => 0,
        AlphaAnswer::No { .. } => EXIT_NO,
        AlphaAnswer::Unknown => EXIT_UNKNOWN,
    })
}

pub fn beta(file: &Path, o: &Options) -> Outcome {
    let gens = input::ideal(file, o.vars)?;
    let ok = beta_consistency(&gens, &o.config())?;
    emit(o, json!({ "consistent": ok }), || if ok { "yes\n".into() } else { "no\n".into() });
    Ok(yes_no(ok))
}

pub fn eval(file: &Path, point: &Path, compress: Option<usize>, o: &Options) -> Outcome {
    let gens = input::ideal(file, o.vars)?;
    let pt = input::point(point)?;
    let values: Vec<Vec<Rational>> = gens.iter().map(|p| p.evaluate(&pt)).collect::<Result<_, _>>()?;
    let vanishes = values.iter().all(|v| v.iter().all(|x| *x == Rational::from_integer(0.into())));
    let mut doc = json!({
        "values": values.iter().map(|v| report::vector(v)).collect::<Vec<_>>(),
        "vanishes": vanishes,
    });
    let mut text = String::new();
    for (p, v) in gens.iter().zip(&values) {
        text += &format!("{} -> {}\n", print_poly(p), vector(v));
    }
    text += if vanishes { "vanishes\n" } else { "does not vanish\n" };
    if let Some(d) = compress {
        let cp = compress_point(&pt, d)?;
        let mut agree = true;
        for (p, v) in gens.iter().zip(&values) {
            if p.degree().unwrap_or(0) <= d {
                agree &= cp.embed(&p.evaluate(&cp.point)?) == *v;
            }
        }
        doc["compressed"] = json!({
            "size": cp.point.size(),
            "mats": cp.point.mats.iter().map(report::matrix).collect::<Vec<_>>(),
            "metric": cp.point.metric.as_deref().map(report::vector),
            "agrees": agree,
        });
        text += &format!(
            "compressed to dimension {} (degree {d}); generators of degree <= {d} agree: {agree}\n",
            cp.point.size()
        );
    }
    emit(o, doc, || text);
    Ok(yes_no(vanishes))
}

fn cap(o: &Options) -> usize {
    o.degree_cap.unwrap_or(DEFAULT_DEGREE_CAP)
}

pub fn smith(file: &Path, o: &Options) -> Outcome {
    let text = input::read(file)?;
    let body: Vec<&str> = text.lines().map(|l| l.split('#').next().unwrap_or("")).collect();
    let joined = body.join(" ");
    if joined.trim().is_empty() {
        return Err(Failure::usage(format!("{}: no matrix", file.display())));
    }
    let p = input::matrix(&joined, &file.display().to_string())?;
    if !p.is_square() {
        return Err(Failure::usage(format!("{}: matrix is not square", file.display())));
    }
    let s = smith_normal_form(&p);
    emit(o, report::smith(&s), || {
        format!(
            "D = {}\nU = {}\nV = {}\n",
            print_unipoly_matrix(&s.d),
            print_unipoly_matrix(&s.u),
            print_unipoly_matrix(&s.v)
        )
    });
    Ok(0)
}

pub fn mat_realrad(file: &Path, o: &Options) -> Outcome {
    let gens = input::matrices(file)?;
    let rad = eradical_matpoly_capped(&gens, cap(o))?;
    emit(o, report::eradical(&rad), || format!("{}\n", print_unipoly_matrix(&rad.canonical_generator())));
    Ok(0)
}

pub fn mat_member(file: &Path, q: &str, o: &Options) -> Outcome {
    let gens = input::matrices(file)?;
    let q = input::matrix(q, "--matrix")?;
    let rad = eradical_matpoly_capped(&gens, cap(o))?;
    let inside = rad.contains(&q)?;
    emit(o, json!({ "member": inside }), || if inside { "yes\n".into() } else { "no\n".into() });
    Ok(yes_no(inside))
}
