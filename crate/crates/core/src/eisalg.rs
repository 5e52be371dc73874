//! Eisenstein series, iterated Eisenstein integrals and the shuffle algebra
//! on words in `e_0, e_2, e_4, ...`.
//!
//! Convention: `E(k_1 ... k_n)` has `d/dT E(k_1 w) = -E_{k_1} E(w)` and zero
//! constant term, `E(()) = 1`.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};

use crate::coeffring::{bernoulli, int, parse_terms, CoeffElem, MzvMonomial, MzvTable, Rational};
use crate::qseries::QTSeries;
use crate::Error;

/// A word `e_{2k_1} ... e_{2k_n}`; letters are stored as the even integers
/// `2k_i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct EWord(Vec<u32>);

impl EWord {
    pub fn empty() -> Self {
        EWord(Vec::new())
    }

    /// `None` if some letter is odd (such words represent zero).
    pub fn new(letters: Vec<u32>) -> Option<Self> {
        letters.iter().all(|l| l % 2 == 0).then_some(EWord(letters))
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letter_sum(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn prepend(&self, letter: u32) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(letter);
        v.extend_from_slice(&self.0);
        EWord(v)
    }

    pub fn concat(&self, other: &EWord) -> Self {
        EWord([self.0.as_slice(), other.0.as_slice()].concat())
    }

    /// Parses `0,4` (the empty string is the empty word).
    pub fn parse(s: &str) -> crate::Result<Option<Self>> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Some(Self::empty()));
        }
        let letters = s
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad letter {p:?} in word {s:?}"))))
            .collect::<crate::Result<Vec<_>>>()?;
        Ok(Self::new(letters))
    }
}

impl Ord for EWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for EWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "e({})", parts.join(","))
    }
}

impl fmt::Debug for EWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Finite linear combination of words with coefficients in the MZV ring.
#[derive(Clone, PartialEq, Default)]
pub struct EPoly {
    terms: BTreeMap<EWord, CoeffElem>,
}

impl EPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(CoeffElem::one())
    }

    pub fn constant(c: CoeffElem) -> Self {
        let mut p = Self::zero();
        p.add_term(EWord::empty(), &c);
        p
    }

    /// `c * e(letters)`; zero if a letter is odd.
    pub fn word(letters: &[u32], c: CoeffElem) -> Self {
        let mut p = Self::zero();
        if let Some(w) = EWord::new(letters.to_vec()) {
            p.add_term(w, &c);
        }
        p
    }

    pub fn add_term(&mut self, w: EWord, c: &CoeffElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&EWord, &CoeffElem)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &EWord) -> CoeffElem {
        self.terms.get(w).cloned().unwrap_or_else(CoeffElem::zero)
    }

    pub fn constant_term(&self) -> CoeffElem {
        self.coeff(&EWord::empty())
    }

    pub fn without_constant(&self) -> Self {
        let mut p = self.clone();
        p.terms.remove(&EWord::empty());
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (w, c) in &other.terms {
            p.add_term(w.clone(), c);
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut p = Self::zero();
        for (w, c) in &self.terms {
            p.add_term(w.clone(), &c.scale(r));
        }
        p
    }

    /// Multiplies every coefficient by `c` (symbol products left free).
    pub fn mul_coeff(&self, c: &CoeffElem) -> Self {
        let mut p = Self::zero();
        for (w, x) in &self.terms {
            p.add_term(w.clone(), &(x * c));
        }
        p
    }

    /// Prepends `letter` to every word.
    pub fn prepend(&self, letter: u32) -> Self {
        let mut p = Self::zero();
        if letter % 2 == 1 {
            return p;
        }
        for (w, c) in &self.terms {
            p.add_term(w.prepend(letter), c);
        }
        p
    }

    /// Homogeneous pieces keyed by (length, letter sum).
    pub fn components(&self) -> BTreeMap<(usize, u32), EPoly> {
        let mut out: BTreeMap<(usize, u32), EPoly> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry((w.len(), w.letter_sum())).or_default().add_term(w.clone(), c);
        }
        out
    }

    /// Applies the table's product rules to every coefficient.
    pub fn normalize(&self, table: &MzvTable) -> crate::Result<Self> {
        let mut p = Self::zero();
        for (w, c) in &self.terms {
            p.add_term(w.clone(), &table.normalize(c)?);
        }
        Ok(p)
    }

    /// Parses `-2*pi*e(0,4) + 1/72*pi^3`; words with odd letters drop out.
    pub fn parse(s: &str) -> crate::Result<Self> {
        let mut p = Self::zero();
        for t in parse_terms(s)? {
            let letters = t.word.unwrap_or_default();
            p = p.add(&Self::word(&letters, CoeffElem::monomial(t.monomial, t.coeff)));
        }
        Ok(p)
    }
}

impl fmt::Display for EPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (w, c) in &self.terms {
            for (m, r) in c.iter() {
                let neg = r < &Rational::zero();
                let a = if neg { -r.clone() } else { r.clone() };
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {} ", if neg { '-' } else { '+' })?;
                }
                first = false;
                let mut parts = Vec::new();
                if !a.is_one() || (m.is_one() && w.is_empty()) {
                    parts.push(crate::coeffring::render_rational(&a));
                }
                if !m.is_one() {
                    parts.push(m.to_string());
                }
                if !w.is_empty() {
                    parts.push(w.to_string());
                }
                write!(f, "{}", parts.join("*"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for EPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `sum_{n<N} a_n q^n` with `a_0 = -B_k/(2k)` and `a_n = sigma_{k-1}(n)`;
/// `E_0 = -1`, odd `k` gives zero.
pub fn eisenstein_qexp(k: u32, order: usize) -> QTSeries<Rational> {
    if k == 0 {
        return QTSeries::constant(int(-1), order);
    }
    let mut s = QTSeries::zero(order);
    if k % 2 == 1 {
        return s;
    }
    s.add_term(0, 0, &(-bernoulli(k as usize) / int(2 * k as i64)));
    for n in 1..order as u64 {
        let mut sigma = num_bigint::BigInt::zero();
        for d in (1..=n).filter(|d| n % d == 0) {
            sigma += num_bigint::BigInt::from(d).pow(k - 1);
        }
        s.add_term(n as u32, 0, &Rational::from_integer(sigma));
    }
    s
}

type IeiCache = RwLock<HashMap<(Vec<u32>, usize), Arc<QTSeries<Rational>>>>;

fn iei_cache() -> &'static IeiCache {
    static CACHE: OnceLock<IeiCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// q-expansion of the iterated Eisenstein integral `E(letters)`; memoized
/// per `(letters, order)`.
pub fn iei_qexp(letters: &[u32], order: usize) -> Arc<QTSeries<Rational>> {
    if letters.iter().any(|l| l % 2 == 1) {
        return Arc::new(QTSeries::zero(order));
    }
    let key = (letters.to_vec(), order);
    if let Some(s) = iei_cache().read().expect("iei cache poisoned").get(&key) {
        return s.clone();
    }
    let s = if letters.is_empty() {
        QTSeries::one(order)
    } else {
        let tail = iei_qexp(&letters[1..], order);
        eisenstein_qexp(letters[0], order).neg().mul(&tail).antider()
    };
    let s = Arc::new(s);
    // concurrent writers compute the same value, so first insert wins
    iei_cache().write().expect("iei cache poisoned").entry(key).or_insert(s).clone()
}

/// All `(|u|,|v|)`-shuffles of `u` and `v`, counted with multiplicity.
pub fn shuffle_words(u: &EWord, v: &EWord) -> EPoly {
    fn go(u: &[u32], v: &[u32], prefix: &mut Vec<u32>, out: &mut BTreeMap<Vec<u32>, i64>) {
        if u.is_empty() || v.is_empty() {
            let mut w = prefix.clone();
            w.extend_from_slice(u);
            w.extend_from_slice(v);
            *out.entry(w).or_insert(0) += 1;
            return;
        }
        prefix.push(u[0]);
        go(&u[1..], v, prefix, out);
        prefix.pop();
        prefix.push(v[0]);
        go(u, &v[1..], prefix, out);
        prefix.pop();
    }
    let mut counts = BTreeMap::new();
    go(&u.0, &v.0, &mut Vec::new(), &mut counts);
    let mut p = EPoly::zero();
    for (w, n) in counts {
        p.add_term(EWord(w), &CoeffElem::from_int(n));
    }
    p
}

/// Shuffle product extended bilinearly; coefficients multiply in the table.
pub fn epoly_mul(x: &EPoly, y: &EPoly, table: &MzvTable) -> crate::Result<EPoly> {
    let mut p = EPoly::zero();
    for (u, a) in x.iter() {
        for (v, b) in y.iter() {
            let c = crate::coeffring::coeff_mul(a, b, table)?;
            p = p.add(&shuffle_words(u, v).mul_coeff(&c));
        }
    }
    Ok(p)
}

/// `sum c_w E(w)` as a q-expansion.
pub fn epoly_to_qexp(x: &EPoly, order: usize) -> QTSeries {
    let mut s = QTSeries::zero(order);
    for (w, c) in x.iter() {
        let e = iei_qexp(w.letters(), order);
        for (&(m, j), r) in e.iter() {
            s.add_term(m, j, &c.scale(r));
        }
    }
    s
}

/// Deconcatenation coproduct: every split `w = u v`, coefficient on the pair.
pub fn deconcat(x: &EPoly) -> BTreeMap<(EWord, EWord), CoeffElem> {
    let mut out: BTreeMap<(EWord, EWord), CoeffElem> = BTreeMap::new();
    for (w, c) in x.iter() {
        for i in 0..=w.len() {
            let key = (EWord(w.0[..i].to_vec()), EWord(w.0[i..].to_vec()));
            let e = out.entry(key).or_insert_with(CoeffElem::zero);
            *e += c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Coefficient of a monomial, used when flattening EPolys into coordinates.
pub fn coordinates(x: &EPoly) -> BTreeMap<(EWord, MzvMonomial), Rational> {
    let mut out = BTreeMap::new();
    for (w, c) in x.iter() {
        for (m, r) in c.iter() {
            out.insert((w.clone(), m.clone()), r.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rat;

    fn w(l: &[u32]) -> EWord {
        EWord::new(l.to_vec()).unwrap()
    }

    fn rq(terms: &[(u32, u32, Rational)], order: usize) -> QTSeries<Rational> {
        let mut s = QTSeries::zero(order);
        for (m, j, c) in terms {
            s.add_term(*m, *j, c);
        }
        s
    }

    #[test]
    fn eisenstein_examples() {
        assert_eq!(
            eisenstein_qexp(4, 4),
            rq(&[(0, 0, rat(1, 240)), (1, 0, int(1)), (2, 0, int(9)), (3, 0, int(28))], 4)
        );
        assert_eq!(eisenstein_qexp(0, 5), rq(&[(0, 0, int(-1))], 5));
        assert!(eisenstein_qexp(3, 5).is_zero());
        assert_eq!(eisenstein_qexp(2, 3).coeff(0, 0), rat(-1, 24));
    }

    #[test]
    fn iei_examples() {
        assert_eq!(*iei_qexp(&[0], 5), QTSeries::t(5));
        assert_eq!(*iei_qexp(&[4], 3), rq(&[(0, 1, rat(-1, 240)), (1, 0, int(-1)), (2, 0, rat(-9, 2))], 3));
        assert_eq!(*iei_qexp(&[], 3), QTSeries::one(3));
        assert!(iei_qexp(&[2, 3], 5).is_zero());
    }

    #[test]
    fn shuffle_examples() {
        let e = |l: &[u32], n| EPoly::word(l, CoeffElem::from_int(n));
        assert_eq!(shuffle_words(&w(&[0]), &w(&[4])), e(&[0, 4], 1).add(&e(&[4, 0], 1)));
        assert_eq!(shuffle_words(&w(&[]), &w(&[2])), e(&[2], 1));
        assert_eq!(shuffle_words(&w(&[0]), &w(&[0])), e(&[0, 0], 2));
    }

    #[test]
    fn epoly_mul_examples() {
        let t = MzvTable::shipped();
        let x = EPoly::parse("pi*e(0)").unwrap();
        let y = EPoly::parse("e(4)").unwrap();
        assert_eq!(epoly_mul(&x, &y, &t).unwrap(), EPoly::parse("pi*e(0,4) + pi*e(4,0)").unwrap());
        assert_eq!(epoly_mul(&EPoly::one(), &x, &t).unwrap(), x);
        let a = EPoly::parse("e(2) - e(4)").unwrap();
        let b = EPoly::parse("e(2)").unwrap();
        assert_eq!(epoly_mul(&a, &b, &t).unwrap(), EPoly::parse("2*e(2,2) - e(4,2) - e(2,4)").unwrap());
    }

    #[test]
    fn to_qexp_examples() {
        assert_eq!(epoly_to_qexp(&EPoly::parse("e(0)").unwrap(), 6), QTSeries::t(6));
        let s = epoly_to_qexp(&EPoly::parse("e(0,4) + e(4,0)").unwrap(), 6);
        assert_eq!(s, iei_qexp(&[0], 6).mul(&iei_qexp(&[4], 6)).to_coeff());
        assert_eq!(epoly_to_qexp(&EPoly::parse("5").unwrap(), 6), QTSeries::constant(CoeffElem::from_int(5), 6));
    }

    #[test]
    fn deconcat_examples() {
        let d = deconcat(&EPoly::parse("e(0,4)").unwrap());
        let keys: Vec<_> = d.keys().cloned().collect();
        assert_eq!(keys.len(), 3);
        assert!(keys.contains(&(w(&[]), w(&[0, 4]))));
        assert!(keys.contains(&(w(&[0]), w(&[4]))));
        assert!(keys.contains(&(w(&[0, 4]), w(&[]))));
        let d = deconcat(&EPoly::one());
        assert_eq!(d.len(), 1);
        assert!(d.contains_key(&(w(&[]), w(&[]))));
    }

    #[test]
    fn render_and_parse() {
        let p = EPoly::parse("1/72*pi^3 - 2*pi*e(0,4) - 1/120*pi*e(0,0)").unwrap();
        assert_eq!(p.to_string(), "1/72*pi^3 - 1/120*pi*e(0,0) - 2*pi*e(0,4)");
        assert_eq!(EPoly::parse(&p.to_string()).unwrap(), p);
        assert_eq!(EPoly::zero().to_string(), "0");
        assert_eq!(EPoly::one().to_string(), "1");
        assert!(EPoly::parse("e(3)").unwrap().is_zero());
    }

    #[test]
    fn differential_consistency() {
        for word in [vec![0], vec![4, 0], vec![2, 4, 0], vec![6, 0, 2]] {
            let lhs = iei_qexp(&word, 12).ddt();
            let rhs = eisenstein_qexp(word[0], 12).neg().mul(&iei_qexp(&word[1..], 12));
            assert_eq!(lhs, rhs, "{word:?}");
        }
    }
}
