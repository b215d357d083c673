//! The real radical driver, the realness test, α-radical membership and the
//! β-chain consistency check.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{ldl_psd, Ldl, LdlOutcome};
use crate::linsolve::{complement_low, echelonize, normalize_ideal_at, prune_generators, NormalizedIdeal, SpanBasis};
use crate::ncpoly::{NCPoly, Word};
use crate::psdfeas::{
    empty_span_certificate, extract_generators, find_nonzero_psd, find_psd_normalized, FeasConfig, FeasibleCert,
    PsdCertificate,
};
use crate::qmat::QMat;
use crate::rational::Rational;
use crate::soscone::{gram_over, gram_subspace, sandwich, sym_span_of_ideal};

#[derive(Clone, Debug, PartialEq)]
pub struct RealRadConfig {
    pub feas: FeasConfig,
    /// Try a sum of squares inside the span of the generators' hermitian
    /// parts before the full round.
    pub shortcut: bool,
    /// Largest complement (or word list) a round may build before giving up.
    pub max_words: usize,
    /// Number of variables; never fewer than the largest index in use.
    pub vars: Option<usize>,
}

impl Default for RealRadConfig {
    fn default() -> Self {
        RealRadConfig {
            feas: FeasConfig::default(),
            shortcut: true,
            max_words: 400,
            vars: None,
        }
    }
}

impl From<FeasConfig> for RealRadConfig {
    fn from(feas: FeasConfig) -> Self {
        RealRadConfig {
            feas,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundMethod {
    /// Gram matrices over suffixes of the generators' hermitian parts.
    Shortcut,
    /// Gram matrices over the complement of `I_{d−1}`.
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    pub k: usize,
    /// Number of variables of the ambient algebra.
    pub g: usize,
    pub generators: Vec<NCPoly>,
    pub degree: usize,
    pub dim_low: usize,
    pub method: RoundMethod,
    pub words: Vec<Word>,
    pub gram: Vec<QMat>,
    pub certificate: PsdCertificate,
    /// New generators, none of them in the round's ideal.
    pub extracted: Vec<NCPoly>,
}

impl RoundRecord {
    pub fn word_polys(&self) -> Vec<NCPoly> {
        self.words.iter().cloned().map(NCPoly::word).collect()
    }

    /// Re-checks the certificate and that `vᵀBv` lies in `I + I*`.
    pub fn verify(&self) -> std::result::Result<(), String> {
        crate::psdfeas::verify_certificate(&self.gram, &self.certificate)?;
        if let PsdCertificate::Feasible(f) = &self.certificate {
            let h = sandwich(&self.word_polys(), &f.b);
            let ok = match self.method {
                RoundMethod::Shortcut => hermitian_span(&self.generators).contains(&h),
                RoundMethod::Full => {
                    let n = normalize_ideal_at(&self.generators, self.g, self.degree).map_err(|e| e.to_string())?;
                    sym_span_of_ideal(&n).contains(&h)
                }
            };
            if !ok {
                return Err("vᵀBv is not in I + I*".into());
            }
            let qs = extract_generators(f, &self.word_polys());
            if qs != self.extracted && self.method == RoundMethod::Full {
                return Err("extracted generators do not match the certificate".into());
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RealRadicalTrace {
    pub rounds: Vec<RoundRecord>,
}

#[derive(Clone, Debug)]
pub struct RealRadical {
    pub g: usize,
    /// Generators of the output ideal as kept by the last round.
    pub generators: Vec<NCPoly>,
    pub ideal: NormalizedIdeal,
    pub trace: RealRadicalTrace,
}

impl RealRadical {
    pub fn presentation(&self) -> Vec<NCPoly> {
        self.ideal.presentation()
    }

    pub fn is_unit(&self) -> bool {
        self.ideal.is_unit()
    }

    /// Irredundant subset of the presentation, lowest degrees first.
    pub fn minimal_generators(&self) -> Result<Vec<NCPoly>> {
        prune_generators(&self.presentation())
    }

    /// Whether `q` is in the output ideal.
    pub fn contains(&self, q: &NCPoly) -> Result<bool> {
        if q.max_var() <= self.g {
            return Ok(self.ideal.member(q));
        }
        Ok(normalize_ideal_at(&self.generators, q.max_var(), self.ideal.d())?.member(q))
    }
}

/// A failed run together with the rounds completed before the failure.
#[derive(Clone, Debug, thiserror::Error)]
#[error("{error}")]
pub struct RealRadError {
    pub error: Error,
    pub trace: RealRadicalTrace,
}

impl From<Error> for RealRadError {
    fn from(error: Error) -> Self {
        RealRadError {
            error,
            trace: RealRadicalTrace::default(),
        }
    }
}

fn max_var(gens: &[NCPoly]) -> usize {
    gens.iter().map(NCPoly::max_var).max().unwrap_or(0).max(1)
}

fn vars(gens: &[NCPoly], cfg: &RealRadConfig) -> usize {
    max_var(gens).max(cfg.vars.unwrap_or(0))
}

fn max_degree(gens: &[NCPoly]) -> Result<usize> {
    gens.iter().filter_map(NCPoly::degree).max().ok_or(Error::EmptyGenerators)
}

fn herm(p: &NCPoly) -> NCPoly {
    p + &p.adjoint()
}

fn hermitian_span(gens: &[NCPoly]) -> SpanBasis {
    echelonize(&gens.iter().map(herm).collect::<Vec<_>>())
}

/// Suffixes of length at most `deg/2` of every monomial of every element.
fn half_suffixes(polys: &[NCPoly], cap: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    out.insert(Word::one());
    for p in polys {
        let half = p.degree().unwrap_or(0) / 2;
        for w in p.terms().keys() {
            for k in 0..=half.min(w.len()).min(cap) {
                out.insert(w.split_at(w.len() - k).1);
            }
        }
    }
    out
}

struct Attempt {
    words: Vec<Word>,
    gram: Vec<QMat>,
    cert: FeasibleCert,
}

fn shortcut(gens: &[NCPoly], cfg: &RealRadConfig) -> Option<Attempt> {
    let span = hermitian_span(gens);
    let words: Vec<Word> = half_suffixes(&span.elements(), usize::MAX).into_iter().collect();
    if words.len() > cfg.max_words {
        return None;
    }
    let v: Vec<NCPoly> = words.iter().cloned().map(NCPoly::word).collect();
    let gram = gram_over(&v, &span);
    if gram.is_empty() {
        return None;
    }
    match find_nonzero_psd(&gram.mats, &cfg.feas) {
        Ok(PsdCertificate::Feasible(cert)) => Some(Attempt {
            words,
            gram: gram.mats,
            cert,
        }),
        _ => None,
    }
}

struct FullRound {
    words: Vec<Word>,
    gram: Vec<QMat>,
    cert: PsdCertificate,
}

fn full_round(n: &NormalizedIdeal, cfg: &RealRadConfig) -> Result<FullRound> {
    let v = complement_low(n);
    if v.len() > cfg.max_words {
        return Err(Error::Undecided(format!(
            "complement of dimension {} exceeds the limit of {}",
            v.len(),
            cfg.max_words
        )));
    }
    let s = sym_span_of_ideal(n);
    let gram = gram_subspace(n, &v, &s);
    let cert = if gram.is_empty() {
        empty_span_certificate(v.len())
    } else {
        find_nonzero_psd(&gram.mats, &cfg.feas)?
    };
    Ok(FullRound {
        words: v.words().to_vec(),
        gram: gram.mats,
        cert,
    })
}

/// Real radical of the left ideal generated by `gens`.
///
/// Each round normalizes at the largest degree among the (pruned) current
/// generators, looks for a sum of squares in `I + I*` and adds the rows of
/// its Gram matrix as new generators. The run ends when no such sum exists
/// over the complement of `I_{d−1}`.
pub fn real_radical(gens: &[NCPoly], cfg: &RealRadConfig) -> std::result::Result<RealRadical, RealRadError> {
    let g = vars(gens, cfg);
    let mut current = prune_generators(gens)?;
    let d0 = max_degree(&current)?;
    let bound = Word::count_up_to(g, d0.saturating_sub(1));
    let mut trace = RealRadicalTrace::default();
    macro_rules! tryt {
        ($e:expr) => {
            match $e {
                Ok(x) => x,
                Err(error) => return Err(RealRadError { error, trace }),
            }
        };
    }
    loop {
        assert!(
            trace.rounds.len() <= bound,
            "round count {} exceeds dim A_(d-1) = {bound}",
            trace.rounds.len()
        );
        current = tryt!(prune_generators(&current));
        let d = tryt!(max_degree(&current));
        let n = tryt!(normalize_ideal_at(&current, g, d));
        if n.is_unit() {
            return Ok(RealRadical {
                g,
                generators: current,
                ideal: n,
                trace,
            });
        }
        let k = trace.rounds.len();

        if cfg.shortcut {
            if let Some(a) = shortcut(&current, cfg) {
                let v: Vec<NCPoly> = a.words.iter().cloned().map(NCPoly::word).collect();
                let new: Vec<NCPoly> = extract_generators(&a.cert, &v)
                    .into_iter()
                    .filter(|q| !n.member(q))
                    .collect();
                if !new.is_empty() {
                    for q in &new {
                        assert!(q.degree().unwrap_or(0) < d, "extracted generator of degree >= {d}");
                    }
                    trace.rounds.push(RoundRecord {
                        k,
                        g,
                        generators: current.clone(),
                        degree: d,
                        dim_low: n.dim_low(),
                        method: RoundMethod::Shortcut,
                        words: a.words,
                        gram: a.gram,
                        certificate: PsdCertificate::Feasible(a.cert),
                        extracted: new.clone(),
                    });
                    current.extend(new);
                    continue;
                }
            }
        }

        let r = tryt!(full_round(&n, cfg));
        match r.cert {
            PsdCertificate::Feasible(f) => {
                let v: Vec<NCPoly> = r.words.iter().cloned().map(NCPoly::word).collect();
                let new = extract_generators(&f, &v);
                for q in &new {
                    assert!(q.degree().unwrap_or(0) < d, "extracted generator of degree >= {d}");
                    assert!(!n.member(q), "extracted generator already in the ideal");
                }
                trace.rounds.push(RoundRecord {
                    k,
                    g,
                    generators: current.clone(),
                    degree: d,
                    dim_low: n.dim_low(),
                    method: RoundMethod::Full,
                    words: r.words,
                    gram: r.gram,
                    certificate: PsdCertificate::Feasible(f),
                    extracted: new.clone(),
                });
                current.extend(new);
            }
            cert @ PsdCertificate::Infeasible(_) => {
                trace.rounds.push(RoundRecord {
                    k,
                    g,
                    generators: current.clone(),
                    degree: d,
                    dim_low: n.dim_low(),
                    method: RoundMethod::Full,
                    words: r.words,
                    gram: r.gram,
                    certificate: cert,
                    extracted: Vec::new(),
                });
                return Ok(RealRadical {
                    g,
                    generators: current,
                    ideal: n,
                    trace,
                });
            }
        }
    }
}

/// One full round: real iff no nonzero PSD Gram matrix exists over the
/// complement.
pub fn is_real(gens: &[NCPoly], cfg: &RealRadConfig) -> Result<bool> {
    Ok(is_real_with_round(gens, cfg)?.0)
}

/// Same as [`is_real`], also returning the round that decided it (absent
/// for the unit ideal).
pub fn is_real_with_round(gens: &[NCPoly], cfg: &RealRadConfig) -> Result<(bool, Option<RoundRecord>)> {
    let g = vars(gens, cfg);
    let kept = prune_generators(gens)?;
    let d = max_degree(&kept)?;
    let n = normalize_ideal_at(&kept, g, d)?;
    if n.is_unit() {
        return Ok((true, None));
    }
    let r = full_round(&n, cfg)?;
    let real = !r.cert.is_feasible();
    let extracted = match &r.cert {
        PsdCertificate::Feasible(f) => extract_generators(f, &r.words.iter().cloned().map(NCPoly::word).collect::<Vec<_>>()),
        PsdCertificate::Infeasible(_) => Vec::new(),
    };
    Ok((
        real,
        Some(RoundRecord {
            k: 0,
            g,
            generators: kept,
            degree: d,
            dim_low: n.dim_low(),
            method: RoundMethod::Full,
            words: r.words,
            gram: r.gram,
            certificate: r.cert,
            extracted,
        }),
    ))
}

// ---------------------------------------------------------------------------
// α-radical

/// Which span of `I + I*` a certificate was found in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaTier {
    /// `a` itself is in `I`.
    Member,
    /// `span{m·p + (m·p)* : p a generator, |m| ≤ t}`.
    Generators(usize),
    /// All hermitian elements of `I + I*` of degree at most `2·degree − 2`.
    Full { degree: usize },
}

/// `a*a + σ ∈ I + I*` with `σ = uᵀ G u` over `words`: `a − reduced ∈ I`,
/// `m = G + c cᵀ` for the coefficient vector `c` of `reduced`, and
/// `h = uᵀ m u` lies in the span named by `tier`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaCertificate {
    pub reduced: NCPoly,
    pub words: Vec<Word>,
    pub tier: AlphaTier,
    pub m: QMat,
    pub sigma: QMat,
    pub ldl: Ldl,
    pub h: NCPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaAnswer {
    Yes(AlphaCertificate),
    /// The part of `a` outside `I ⊕ 𝒜_{d−1}`.
    No { obstruction: NCPoly },
    Unknown,
}

impl AlphaAnswer {
    pub fn is_yes(&self) -> bool {
        matches!(self, AlphaAnswer::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, AlphaAnswer::No { .. })
    }
}

const ALPHA_TIERS: usize = 2;

fn tier_span(gens: &[NCPoly], g: usize, t: usize) -> SpanBasis {
    let mut b = SpanBasis::new();
    for m in Word::all_up_to(g, t) {
        for p in gens {
            b.insert(&herm(&p.left_mul_word(&m)));
        }
    }
    b
}

fn coefficient_vector(p: &NCPoly, words: &[Word]) -> Vec<Rational> {
    words.iter().map(|w| p.coeff(w)).collect()
}

fn try_alpha(
    reduced: &NCPoly,
    words: Vec<Word>,
    span: &SpanBasis,
    tier: AlphaTier,
    cfg: &FeasConfig,
) -> Option<AlphaCertificate> {
    let u: Vec<NCPoly> = words.iter().cloned().map(NCPoly::word).collect();
    let gram = gram_over(&u, span);
    if gram.is_empty() {
        return None;
    }
    let l = words.len();
    let c = coefficient_vector(reduced, &words);
    // bordered matrices [[s, s cᵀ], [s c, M]]; PSD with s > 0 gives M/s − c cᵀ ⪰ 0
    let mut mats = Vec::with_capacity(gram.dim() + 1);
    let mut e0 = QMat::zeros(l + 1, l + 1);
    e0[(0, 0)] = Rational::from_integer(1.into());
    for (i, ci) in c.iter().enumerate() {
        e0[(0, i + 1)] = ci.clone();
        e0[(i + 1, 0)] = ci.clone();
    }
    mats.push(e0);
    for a in &gram.mats {
        mats.push(QMat::from_fn(l + 1, l + 1, |i, j| {
            if i == 0 || j == 0 {
                Rational::zero()
            } else {
                a[(i - 1, j - 1)].clone()
            }
        }));
    }
    let mut normal = QMat::zeros(l + 1, l + 1);
    normal[(0, 0)] = Rational::from_integer(1.into());
    let f = find_psd_normalized(&mats, &normal, cfg)?;
    let s = f.b[(0, 0)].clone();
    if !s.is_positive() {
        return None;
    }
    let m = QMat::from_fn(l, l, |i, j| &f.b[(i + 1, j + 1)] / &s);
    let sigma = QMat::from_fn(l, l, |i, j| &m[(i, j)] - &c[i] * &c[j]);
    let LdlOutcome::Psd(ldl) = ldl_psd(&sigma) else {
        return None;
    };
    let h = sandwich(&u, &m);
    Some(AlphaCertificate {
        reduced: reduced.clone(),
        words,
        tier,
        m,
        sigma,
        ldl,
        h,
    })
}

/// Decides `a ∈ α√I` where possible: yes with an exact certificate, no when
/// `a ∉ I ⊕ 𝒜_{d−1}` (`d` the largest generator degree), unknown otherwise.
/// `degree_cap` bounds the degree of `σ` and defaults to `2d − 2`.
pub fn alpha_member(
    a: &NCPoly,
    gens: &[NCPoly],
    degree_cap: Option<usize>,
    cfg: &RealRadConfig,
) -> Result<AlphaAnswer> {
    let gens: Vec<NCPoly> = gens.iter().filter(|p| !p.is_zero()).cloned().collect();
    let d = max_degree(&gens)?;
    let g = vars(&gens, cfg).max(a.max_var());
    let n = normalize_ideal_at(&gens, g, d)?;
    let trivial = |reduced: NCPoly| {
        AlphaAnswer::Yes(AlphaCertificate {
            reduced,
            words: Vec::new(),
            tier: AlphaTier::Member,
            m: QMat::zeros(0, 0),
            sigma: QMat::zeros(0, 0),
            ldl: Ldl::default(),
            h: NCPoly::zero(),
        })
    };
    if n.member(a) {
        return Ok(trivial(NCPoly::zero()));
    }
    if !n.within_low_degree_of(a) {
        let obstruction = n.normal_form(a);
        let top: NCPoly = NCPoly::from_terms(
            obstruction
                .terms()
                .iter()
                .filter(|(w, _)| w.len() >= d)
                .map(|(w, c)| (w.clone(), c.clone())),
        );
        return Ok(AlphaAnswer::No { obstruction: top });
    }
    let reduced = n.normal_form(a);
    let cap = degree_cap.unwrap_or((2 * d).saturating_sub(2));
    let e = cap / 2;
    let own: BTreeSet<Word> = reduced.terms().keys().cloned().collect();

    for t in 0..=ALPHA_TIERS {
        if Word::count_up_to(g, t) * gens.len() > 4 * cfg.max_words {
            break;
        }
        let span = tier_span(&gens, g, t);
        let mut words = half_suffixes(&span.elements(), e);
        words.extend(own.iter().cloned());
        if words.len() > cfg.max_words / 4 {
            break;
        }
        if let Some(c) = try_alpha(&reduced, words.into_iter().collect(), &span, AlphaTier::Generators(t), &cfg.feas) {
            return Ok(AlphaAnswer::Yes(c));
        }
    }

    if Word::count_up_to(g, e) + own.len() <= cfg.max_words / 4 {
        let big = d.max(e + 1);
        let nb = normalize_ideal_at(&gens, g, big)?;
        let span = sym_span_of_ideal(&nb);
        let mut words: BTreeSet<Word> = Word::all_up_to(g, e).into_iter().collect();
        words.extend(own.iter().cloned());
        if let Some(c) = try_alpha(
            &reduced,
            words.into_iter().collect(),
            &span.basis,
            AlphaTier::Full { degree: big },
            &cfg.feas,
        ) {
            return Ok(AlphaAnswer::Yes(c));
        }
    }
    Ok(AlphaAnswer::Unknown)
}

/// Re-derives an α certificate for `a` over `gens`.
pub fn verify_alpha(cert: &AlphaCertificate, a: &NCPoly, gens: &[NCPoly]) -> std::result::Result<(), String> {
    let g = max_var(gens).max(a.max_var());
    let d = max_degree(gens).map_err(|e| e.to_string())?;
    let n = normalize_ideal_at(gens, g, d.max(a.degree().unwrap_or(0))).map_err(|e| e.to_string())?;
    if !n.member(&(a - &cert.reduced)) {
        return Err("a − reduced is not in I".into());
    }
    if cert.tier == AlphaTier::Member {
        return if cert.reduced.is_zero() {
            Ok(())
        } else {
            Err("member certificate with nonzero remainder".into())
        };
    }
    match ldl_psd(&cert.sigma) {
        LdlOutcome::Psd(l) if l == cert.ldl => {}
        _ => return Err("σ Gram matrix is not certified PSD".into()),
    }
    let c = coefficient_vector(&cert.reduced, &cert.words);
    let l = cert.words.len();
    if QMat::from_fn(l, l, |i, j| &cert.sigma[(i, j)] + &c[i] * &c[j]) != cert.m {
        return Err("m ≠ σ + c cᵀ".into());
    }
    let u: Vec<NCPoly> = cert.words.iter().cloned().map(NCPoly::word).collect();
    if sandwich(&u, &cert.m) != cert.h {
        return Err("h ≠ uᵀ m u".into());
    }
    let expect = &(&cert.reduced.adjoint() * &cert.reduced) + &sandwich(&u, &cert.sigma);
    if expect != cert.h {
        return Err("h ≠ a*a + σ".into());
    }
    let inside = match cert.tier {
        AlphaTier::Member => unreachable!(),
        AlphaTier::Generators(t) => tier_span(gens, g, t).contains(&cert.h),
        AlphaTier::Full { degree } => {
            let nb = normalize_ideal_at(gens, g, degree).map_err(|e| e.to_string())?;
            sym_span_of_ideal(&nb).contains(&cert.h)
        }
    };
    if inside {
        Ok(())
    } else {
        Err("h is not in I + I*".into())
    }
}

/// Every generator added by the run is an α-radical member of the ideal it
/// was extracted from, and the output is real.
pub fn check_beta(rr: &RealRadical, cfg: &RealRadConfig) -> Result<bool> {
    for r in &rr.trace.rounds {
        for q in &r.extracted {
            if !alpha_member(q, &r.generators, None, cfg)?.is_yes() {
                return Ok(false);
            }
        }
    }
    is_real(&rr.generators, cfg)
}

pub fn beta_consistency(gens: &[NCPoly], cfg: &RealRadConfig) -> Result<bool> {
    let rr = real_radical(gens, cfg).map_err(|e| e.error)?;
    check_beta(&rr, cfg)
}
