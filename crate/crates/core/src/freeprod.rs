//! Free products of finite semihypergroups.
//!
//! The carrier is the set of reduced words over an ordered family of factors:
//! adjacent letters come from different factors and, when two or more factors
//! have an identity, no letter is an identity and the empty word `e` stands
//! for all of them at once. Point masses on words convolve by concatenation,
//! except at a junction where the two touching letters share a factor; there
//! the factor's own table decides, and any mass landing on that factor's
//! identity is passed on to the convolution of the shortened words.
//!
//! The carrier is infinite, so everything here is lazy: words are produced on
//! demand and exhaustive checks run over caller-chosen truncations.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::measure::{convolve_extend, Measure, PointConvolution};
use crate::shg::{Elem, FiniteSemihypergroup, GammaLift, HomError, Homomorphism};

/// Element `element` of factor `factor` (0-based; rendered 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub factor: usize,
    pub element: Elem,
}

impl Letter {
    pub fn new(factor: usize, element: Elem) -> Self {
        Letter { factor, element }
    }
}

/// A reduced word. Ordered by length, then factor indices, then elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn from_parts(head: &[Letter], middle: Option<Letter>, tail: &[Letter]) -> Self {
        let mut v = Vec::with_capacity(head.len() + tail.len() + 1);
        v.extend_from_slice(head);
        v.extend(middle);
        v.extend_from_slice(tail);
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| {
                self.0
                    .iter()
                    .map(|l| l.factor)
                    .cmp(other.0.iter().map(|l| l.factor))
            })
            .then_with(|| {
                self.0
                    .iter()
                    .map(|l| l.element)
                    .cmp(other.0.iter().map(|l| l.element))
            })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// How identities of the factors are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityMode {
    /// No factor has an identity.
    NoIdentity,
    /// Exactly one factor has an identity; it is kept as the ordinary letter `x_e`.
    Renamed { factor: usize, element: Elem },
    /// Two or more factors have identities, all identified with the empty word.
    Shared,
}

impl fmt::Display for IdentityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityMode::NoIdentity => f.write_str("no-identity"),
            IdentityMode::Renamed { factor, .. } => {
                write!(f, "renamed (x_e from factor {})", factor + 1)
            }
            IdentityMode::Shared => f.write_str("shared (identity e)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeProductError {
    #[error("a free product needs at least one factor")]
    NoFactors,
    #[error("factor {factor} (`{name}`) is not pure: p_{x} * p_{y} is the identity point mass")]
    ImpureFactor {
        factor: usize,
        name: String,
        x: String,
        y: String,
    },
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("subset product: {0}")]
    SubsetProduct(String),
    #[error("factor {factor}: {source}")]
    Hom { factor: usize, source: HomError },
    #[error("expected {expected} maps, one per factor, got {found}")]
    MapCount { expected: usize, found: usize },
    #[error("factor {factor}: identity must map to the identity of the target")]
    IdentityNotPreserved { factor: usize },
    #[error("the target has no identity, but the free product does")]
    TargetWithoutIdentity,
}

/// `∏* K_α` over an ordered family of finite factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeProduct {
    factors: Vec<FiniteSemihypergroup>,
    mode: IdentityMode,
}

/// A triple whose two associations differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordTripleFailure {
    pub x: Word,
    pub y: Word,
    pub z: Word,
    pub left: Measure<Word>,
    pub right: Measure<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociativityReport {
    pub words: usize,
    pub triples_checked: usize,
    pub failures: Vec<WordTripleFailure>,
}

impl AssociativityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl FreeProduct {
    /// Determines the identity mode and enforces purity when identities are shared.
    pub fn build(factors: Vec<FiniteSemihypergroup>) -> Result<Self, FreeProductError> {
        if factors.is_empty() {
            return Err(FreeProductError::NoFactors);
        }
        let with_identity: Vec<(usize, Elem)> = factors
            .iter()
            .enumerate()
            .filter_map(|(i, k)| k.identity().map(|e| (i, e)))
            .collect();
        let mode = match with_identity.as_slice() {
            [] => IdentityMode::NoIdentity,
            [(factor, element)] => IdentityMode::Renamed {
                factor: *factor,
                element: *element,
            },
            _ => {
                for &(i, _) in &with_identity {
                    let k = &factors[i];
                    if let Some((x, y)) = k.impurity_witness() {
                        return Err(FreeProductError::ImpureFactor {
                            factor: i + 1,
                            name: k.name().to_string(),
                            x: k.element_name(x).to_string(),
                            y: k.element_name(y).to_string(),
                        });
                    }
                }
                IdentityMode::Shared
            }
        };
        Ok(FreeProduct { factors, mode })
    }

    pub fn mode(&self) -> IdentityMode {
        self.mode
    }

    pub fn factors(&self) -> &[FiniteSemihypergroup] {
        &self.factors
    }

    pub fn factor(&self, alpha: usize) -> &FiniteSemihypergroup {
        &self.factors[alpha]
    }

    /// Whether the free product itself has an identity (the empty word).
    pub fn has_identity(&self) -> bool {
        self.mode == IdentityMode::Shared
    }

    /// True for letters that are a factor identity folded into the empty word.
    fn collapses(&self, factor: usize, element: Elem) -> bool {
        self.mode == IdentityMode::Shared && self.factors[factor].identity() == Some(element)
    }

    fn word_error(&self, letters: &[Letter]) -> Option<String> {
        if letters.is_empty() {
            return (!self.has_identity())
                .then(|| "the empty word exists only when identities are shared".to_string());
        }
        for (i, l) in letters.iter().enumerate() {
            let Some(k) = self.factors.get(l.factor) else {
                return Some(format!(
                    "letter {} refers to factor {} of {}",
                    i + 1,
                    l.factor + 1,
                    self.factors.len()
                ));
            };
            if l.element >= k.len() {
                return Some(format!(
                    "letter {} is not an element of factor {}",
                    i + 1,
                    l.factor + 1
                ));
            }
            if self.collapses(l.factor, l.element) {
                return Some(format!(
                    "letter {} is the identity of factor {}",
                    i + 1,
                    l.factor + 1
                ));
            }
            if i > 0 && letters[i - 1].factor == l.factor {
                return Some(format!(
                    "letters {} and {} both come from factor {}",
                    i,
                    i + 1,
                    l.factor + 1
                ));
            }
        }
        None
    }

    /// Whether `letters` form a reduced word in this free product.
    pub fn validate_word(&self, letters: &[Letter]) -> bool {
        self.word_error(letters).is_none()
    }

    pub fn word(&self, letters: Vec<Letter>) -> Result<Word, FreeProductError> {
        match self.word_error(&letters) {
            None => Ok(Word(letters)),
            Some(msg) => Err(FreeProductError::InvalidWord(msg)),
        }
    }

    /// The identity of the free product, when it has one.
    pub fn identity_word(&self) -> Option<Word> {
        self.has_identity().then(Word::empty)
    }

    /// `i_α(x)`: the empty word for a shared identity, the one-letter word otherwise.
    pub fn embed_factor(&self, alpha: usize, x: Elem) -> Word {
        assert!(x < self.factors[alpha].len(), "element outside factor");
        if self.collapses(alpha, x) {
            Word::empty()
        } else {
            Word(vec![Letter::new(alpha, x)])
        }
    }

    /// `p_x * p_y` for reduced words.
    pub fn convolve_words(&self, x: &Word, y: &Word) -> Result<Measure<Word>, FreeProductError> {
        for w in [x, y] {
            if let Some(msg) = self.word_error(&w.0) {
                return Err(FreeProductError::InvalidWord(msg));
            }
        }
        Ok(self.convolve_reduced(&x.0, &y.0))
    }

    fn convolve_reduced(&self, x: &[Letter], y: &[Letter]) -> Measure<Word> {
        let (Some(&last), Some(&first)) = (x.last(), y.first()) else {
            return Measure::point_mass(Word::from_parts(x, None, y));
        };
        let (head, tail) = (&x[..x.len() - 1], &y[1..]);
        if last.factor != first.factor {
            return Measure::point_mass(Word::from_parts(x, None, y));
        }
        let alpha = last.factor;
        let junction = self.factors[alpha].product(last.element, first.element);
        let mut out = Measure::zero();
        for (&a, w) in junction.iter() {
            if self.collapses(alpha, a) {
                out.add_scaled(w, &self.convolve_reduced(head, tail));
            } else {
                out.add_scaled(
                    w,
                    &Measure::point_mass(Word::from_parts(head, Some(Letter::new(alpha, a)), tail)),
                );
            }
        }
        out
    }

    /// Bilinear extension of [`FreeProduct::convolve_words`].
    pub fn convolve(
        &self,
        mu: &Measure<Word>,
        nu: &Measure<Word>,
    ) -> Result<Measure<Word>, FreeProductError> {
        for w in mu.support().chain(nu.support()) {
            if let Some(msg) = self.word_error(&w.0) {
                return Err(FreeProductError::InvalidWord(msg));
            }
        }
        Ok(convolve_extend(mu, nu, self).expect("words validated"))
    }

    /// The set product `A₁A₂…Aₙ` for subsets of alternating factors:
    /// every selection `a_i ∈ A_i`, with shared identities deleted, kept when
    /// the result is still a reduced word. All-identity selections give `e`.
    pub fn subset_product(
        &self,
        sets: &[(usize, Vec<Elem>)],
    ) -> Result<BTreeSet<Word>, FreeProductError> {
        let bad = |msg: String| Err(FreeProductError::SubsetProduct(msg));
        if sets.is_empty() {
            return bad("no sets given".into());
        }
        for (i, (alpha, set)) in sets.iter().enumerate() {
            let Some(k) = self.factors.get(*alpha) else {
                return bad(format!(
                    "set {} names factor {} of {}",
                    i + 1,
                    alpha + 1,
                    self.factors.len()
                ));
            };
            if set.is_empty() {
                return bad(format!("set {} is empty", i + 1));
            }
            if set.iter().any(|&x| x >= k.len()) {
                return bad(format!(
                    "set {} has an element outside factor {}",
                    i + 1,
                    alpha + 1
                ));
            }
            if i > 0 && sets[i - 1].0 == *alpha {
                return bad(format!(
                    "sets {} and {} both come from factor {}",
                    i,
                    i + 1,
                    alpha + 1
                ));
            }
        }
        let mut out = BTreeSet::new();
        let mut choice = vec![0usize; sets.len()];
        loop {
            let letters: Vec<Letter> = sets
                .iter()
                .zip(&choice)
                .map(|((alpha, set), &c)| Letter::new(*alpha, set[c]))
                .filter(|l| !self.collapses(l.factor, l.element))
                .collect();
            if self.validate_word(&letters) {
                out.insert(Word(letters));
            }
            // odometer over the cartesian product
            let mut i = sets.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < sets[i].1.len() {
                    break;
                }
                choice[i] = 0;
            }
        }
    }

    /// All reduced words of length at most `max_len`, in word order.
    pub fn enumerate_words(&self, max_len: usize) -> Vec<Word> {
        let letters: Vec<Letter> = self
            .factors
            .iter()
            .enumerate()
            .flat_map(|(alpha, k)| (0..k.len()).map(move |x| Letter::new(alpha, x)))
            .filter(|l| !self.collapses(l.factor, l.element))
            .collect();
        let mut out = Vec::new();
        if self.has_identity() {
            out.push(Word::empty());
        }
        let mut layer = vec![Word::empty()];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|w| {
                    let last = w.0.last().map(|l| l.factor);
                    letters
                        .iter()
                        .filter(move |l| Some(l.factor) != last)
                        .map(move |&l| {
                            let mut v = w.0.clone();
                            v.push(l);
                            Word(v)
                        })
                })
                .collect();
            out.extend(layer.iter().cloned());
        }
        out.sort();
        out
    }

    /// Exhaustive associativity check over all triples of words up to `max_len`.
    pub fn check_associativity(&self, max_len: usize) -> AssociativityReport {
        let words = self.enumerate_words(max_len);
        let failures: Vec<WordTripleFailure> = words
            .par_iter()
            .flat_map_iter(|x| {
                let px = Measure::point_mass(x.clone());
                let words = &words;
                words.iter().flat_map(move |y| {
                    let xy = self.convolve_reduced(&x.0, &y.0);
                    let px = px.clone();
                    words.iter().filter_map(move |z| {
                        let left = convolve_extend(&xy, &Measure::point_mass(z.clone()), self)
                            .expect("valid words");
                        let yz = self.convolve_reduced(&y.0, &z.0);
                        let right = convolve_extend(&px, &yz, self).expect("valid words");
                        (left != right).then(|| WordTripleFailure {
                            x: x.clone(),
                            y: y.clone(),
                            z: z.clone(),
                            left,
                            right,
                        })
                    })
                })
            })
            .collect();
        let n = words.len();
        AssociativityReport {
            words: n,
            triples_checked: n * n * n,
            failures,
        }
    }

    /// Words `w` (up to `max_len`) for which `p_e * p_w = p_w = p_w * p_e` fails.
    /// Empty when the free product has no identity.
    pub fn identity_law_failures(&self, max_len: usize) -> Vec<Word> {
        let Some(e) = self.identity_word() else {
            return Vec::new();
        };
        self.enumerate_words(max_len)
            .into_iter()
            .filter(|w| {
                let pw = Measure::point_mass(w.clone());
                self.convolve_reduced(&e.0, &w.0) != pw || self.convolve_reduced(&w.0, &e.0) != pw
            })
            .collect()
    }

    /// Pairs up to `max_len` whose convolution is not a probability measure on
    /// reduced words of length at most `len(x) + len(y)`.
    pub fn probability_failures(&self, max_len: usize) -> Vec<(Word, Word)> {
        let words = self.enumerate_words(max_len);
        let mut out = Vec::new();
        for x in &words {
            for y in &words {
                let m = self.convolve_reduced(&x.0, &y.0);
                let ok = m.is_probability()
                    && m.support()
                        .all(|w| self.validate_word(&w.0) && w.len() <= x.len() + y.len());
                if !ok {
                    out.push((x.clone(), y.clone()));
                }
            }
        }
        out
    }

    /// Pairs `(x, y)` of factor `alpha` where convolving the embedded words
    /// differs from pushing `p_x * p_y` forward along the embedding.
    pub fn embedding_failures(&self, alpha: usize) -> Vec<(Elem, Elem)> {
        let k = &self.factors[alpha];
        let mut out = Vec::new();
        for x in 0..k.len() {
            for y in 0..k.len() {
                let lhs = self.convolve_reduced(
                    &self.embed_factor(alpha, x).0,
                    &self.embed_factor(alpha, y).0,
                );
                let rhs = k
                    .product(x, y)
                    .pushforward(|&z| self.embed_factor(alpha, z));
                if lhs != rhs {
                    out.push((x, y));
                }
            }
        }
        out
    }

    fn letter_name(&self, l: &Letter) -> String {
        let k = &self.factors[l.factor];
        let name = match self.mode {
            IdentityMode::Renamed { factor, element }
                if (factor, element) == (l.factor, l.element) =>
            {
                "x_e"
            }
            _ => k.element_name(l.element),
        };
        format!("{}@{}", name, l.factor + 1)
    }

    /// `(a@1 b@2)`, or `e` for the empty word.
    pub fn render_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "e".to_string();
        }
        let parts: Vec<String> = w.0.iter().map(|l| self.letter_name(l)).collect();
        format!("({})", parts.join(" "))
    }

    /// Terms in word order, e.g. `1/2 * e + 1/2 * (a@1)`.
    pub fn format_measure(&self, mu: &Measure<Word>) -> String {
        crate::measure::format_terms(mu.iter().map(|(w, c)| (c, self.render_word(w))))
    }

    /// Parses the rendering produced by [`FreeProduct::render_word`]. In renamed
    /// mode the identity letter may be written `x_e@k` or by its own name.
    pub fn parse_word(&self, text: &str) -> Result<Word, FreeProductError> {
        let text = text.trim();
        if text == "e" || text == "()" {
            return self.word(Vec::new());
        }
        let inner = text
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(text);
        let letters = inner
            .split_whitespace()
            .map(|tok| self.parse_letter(tok))
            .collect::<Result<Vec<_>, _>>()?;
        self.word(letters)
    }

    fn parse_letter(&self, tok: &str) -> Result<Letter, FreeProductError> {
        let bad = || {
            FreeProductError::InvalidWord(format!("cannot read letter `{tok}` (expected name@k)"))
        };
        let (name, idx) = tok.rsplit_once('@').ok_or_else(bad)?;
        let k: usize = idx.parse().map_err(|_| bad())?;
        if k == 0 || k > self.factors.len() {
            return Err(bad());
        }
        let alpha = k - 1;
        let element = match (self.mode, name) {
            (IdentityMode::Renamed { factor, element }, "x_e") if factor == alpha => element,
            _ => self.factors[alpha].index_of(name).ok_or_else(bad)?,
        };
        Ok(Letter::new(alpha, element))
    }
}

impl PointConvolution<Word> for FreeProduct {
    fn convolve_points(&self, x: &Word, y: &Word) -> Option<Measure<Word>> {
        self.convolve_words(x, y).ok()
    }
}

/// A pair of words where `Γ` fails to be multiplicative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftFailure {
    pub x: Word,
    pub y: Word,
    pub image_of_product: Measure<Elem>,
    pub product_of_images: Measure<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftReport {
    pub pairs_checked: usize,
    pub failures: Vec<LiftFailure>,
}

impl LiftReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The measure map `Γ : M(∏* K_α) → M(H)` induced by homomorphisms
/// `φ_α : K_α → H`, with `Γ(p_{x₁…xₙ}) = p_{φ(x₁)} * … * p_{φ(xₙ)}`.
#[derive(Debug, Clone)]
pub struct UniversalLift<'a> {
    product: &'a FreeProduct,
    target: &'a FiniteSemihypergroup,
    homs: Vec<Homomorphism<'a>>,
}

impl<'a> UniversalLift<'a> {
    /// `maps[α][x] = φ_α(x)`. Every map must be a homomorphism, and with shared
    /// identities every factor identity must go to the identity of `target`.
    pub fn new(
        product: &'a FreeProduct,
        target: &'a FiniteSemihypergroup,
        maps: Vec<Vec<Elem>>,
    ) -> Result<Self, FreeProductError> {
        if maps.len() != product.factors.len() {
            return Err(FreeProductError::MapCount {
                expected: product.factors.len(),
                found: maps.len(),
            });
        }
        let mut homs = Vec::with_capacity(maps.len());
        for (alpha, map) in maps.into_iter().enumerate() {
            let hom = Homomorphism::new(&product.factors[alpha], target, map)
                .and_then(|h| h.ensure().map(|_| h))
                .map_err(|source| FreeProductError::Hom {
                    factor: alpha + 1,
                    source,
                })?;
            homs.push(hom);
        }
        if product.has_identity() {
            let e_target = target
                .identity()
                .ok_or(FreeProductError::TargetWithoutIdentity)?;
            for (alpha, hom) in homs.iter().enumerate() {
                if let Some(e) = product.factors[alpha].identity() {
                    if hom.apply(e) != e_target {
                        return Err(FreeProductError::IdentityNotPreserved { factor: alpha + 1 });
                    }
                }
            }
        }
        Ok(UniversalLift {
            product,
            target,
            homs,
        })
    }

    pub fn target(&self) -> &'a FiniteSemihypergroup {
        self.target
    }

    /// `Γ_{φ_α}` for one factor.
    pub fn factor_lift(&self, alpha: usize) -> GammaLift<'a> {
        self.homs[alpha]
            .gamma_lift()
            .expect("checked at construction")
    }

    /// `Γ(p_w)`.
    pub fn image(&self, w: &Word) -> Measure<Elem> {
        let mut letters = w.letters().iter();
        let Some(first) = letters.next() else {
            let e = self.target.identity().expect("checked at construction");
            return Measure::point_mass(e);
        };
        let mut acc = Measure::point_mass(self.homs[first.factor].apply(first.element));
        for l in letters {
            let next = Measure::point_mass(self.homs[l.factor].apply(l.element));
            acc = self
                .target
                .convolve(&acc, &next)
                .expect("images lie in the target");
        }
        acc
    }

    /// Linear extension of [`UniversalLift::image`].
    pub fn apply(&self, mu: &Measure<Word>) -> Measure<Elem> {
        let mut out = Measure::zero();
        for (w, c) in mu.iter() {
            out.add_scaled(c, &self.image(w));
        }
        out
    }

    /// Checks `Γ(p_x * p_y) = Γ(p_x) * Γ(p_y)` for all words up to `max_len`.
    pub fn verify_multiplicative(&self, max_len: usize) -> LiftReport {
        let words = self.product.enumerate_words(max_len);
        let failures: Vec<LiftFailure> = words
            .par_iter()
            .flat_map_iter(|x| {
                let words = &words;
                words.iter().filter_map(move |y| {
                    let image_of_product = self.apply(&self.product.convolve_reduced(&x.0, &y.0));
                    let product_of_images = self
                        .target
                        .convolve(&self.image(x), &self.image(y))
                        .expect("images lie in the target");
                    (image_of_product != product_of_images).then(|| LiftFailure {
                        x: x.clone(),
                        y: y.clone(),
                        image_of_product,
                        product_of_images,
                    })
                })
            })
            .collect();
        LiftReport {
            pairs_checked: words.len() * words.len(),
            failures,
        }
    }

    /// Whether `Γ ∘ i_α` equals `Γ_{φ_α}` on every point mass of factor `alpha`.
    pub fn restricts_to_factor(&self, alpha: usize) -> bool {
        let gamma_alpha = self.factor_lift(alpha);
        (0..self.product.factors[alpha].len()).all(|x| {
            let via_product = self.image(&self.product.embed_factor(alpha, x));
            let direct = gamma_alpha
                .apply(&Measure::point_mass(x))
                .expect("x in factor");
            via_product == direct
        })
    }
}
