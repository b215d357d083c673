//! Reading input files and mapping failures to exit codes.

use std::io::Read;
use std::path::Path;

use ncrad_core::parse::{parse_ideal, parse_point, parse_unipoly_matrix, ParseDiagnostic};
use ncrad_core::{parse_poly, Error, MatrixPoint, NCPoly, UniPolyMatrix};

use crate::{EXIT_PARSE, EXIT_UNKNOWN, EXIT_USAGE};

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: format!("error: {}", message.into()),
        }
    }

    fn parse(source: &str, text: &str, d: &ParseDiagnostic) -> Failure {
        Failure {
            code: EXIT_PARSE,
            message: format!("{source}:{}", d.render(text)),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Undecided(_) | Error::DegreeCapExceeded { .. } => EXIT_UNKNOWN,
            Error::EmptyGenerators => EXIT_USAGE,
            _ => EXIT_PARSE,
        };
        Failure {
            code,
            message: format!("error: {e}"),
        }
    }
}

pub type Outcome = Result<u8, Failure>;

/// Contents of `path`, or standard input for `-`.
pub fn read(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::usage(format!("reading standard input: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn check_vars(polys: &[NCPoly], vars: Option<usize>) -> Result<(), Failure> {
    if let Some(g) = vars {
        if let Some(p) = polys.iter().find(|p| p.max_var() > g) {
            return Err(Failure::usage(format!("x{} is used but --vars is {g}", p.max_var())));
        }
    }
    Ok(())
}

pub fn ideal(path: &Path, vars: Option<usize>) -> Result<Vec<NCPoly>, Failure> {
    let text = read(path)?;
    let source = path.display().to_string();
    let file = parse_ideal(&text).map_err(|d| Failure::parse(&source, &text, &d))?;
    for w in &file.warnings {
        eprintln!("{source}:{}", w.render(&text));
    }
    if file.polys.is_empty() {
        return Err(Failure::usage(format!("{source}: no generators")));
    }
    check_vars(&file.polys, vars)?;
    Ok(file.polys)
}

pub fn poly(text: &str, vars: Option<usize>) -> Result<NCPoly, Failure> {
    let p = parse_poly(text).map_err(|d| Failure::parse("--poly", text, &d))?;
    check_vars(std::slice::from_ref(&p), vars)?;
    Ok(p)
}

pub fn point(path: &Path) -> Result<MatrixPoint, Failure> {
    let text = read(path)?;
    parse_point(&text).map_err(|d| Failure::parse(&path.display().to_string(), &text, &d))
}

pub fn matrix(text: &str, source: &str) -> Result<UniPolyMatrix, Failure> {
    parse_unipoly_matrix(text).map_err(|d| Failure::parse(source, text, &d))
}

/// One matrix per non-blank line; `#` starts a comment.
pub fn matrices(path: &Path) -> Result<Vec<UniPolyMatrix>, Failure> {
    let text = read(path)?;
    let source = path.display().to_string();
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let m = parse_unipoly_matrix(body).map_err(|d| {
            let col = body[..d.span.begin.min(body.len())].chars().count() + 1;
            Failure {
                code: EXIT_PARSE,
                message: format!("{source}:{}:{col}: error: {}", k + 1, d.message),
            }
        })?;
        out.push(m);
    }
    if out.is_empty() {
        return Err(Failure::usage(format!("{source}: no matrices")));
    }
    Ok(out)
}
