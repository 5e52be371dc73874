use std::collections::{BTreeMap, HashMap};
use std::io::Read;

use num_traits::Zero;
use serde::Deserialize;

use super::{reduce_even_zeta, CoeffElem, MzvMonomial, MzvSymbol};
use crate::ncalg::BinWord;
use crate::Error;

/// The reduction table shipped with the crate (weight 8).
pub const SHIPPED_TABLE: &str = include_str!("../../../../data/mzv_w8.toml");

const SUPPORTED_VERSION: u32 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDoc {
    version: u32,
    max_weight: u32,
    #[serde(default)]
    symbols: Vec<SymbolDoc>,
    #[serde(default)]
    single_zeta: BTreeMap<String, String>,
    #[serde(default)]
    products: BTreeMap<String, String>,
    #[serde(default)]
    convergent_words: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolDoc {
    name: String,
    weight: u32,
}

/// Validated multiple zeta value data: basis symbols, reductions of single
/// zeta values, product rules, and values of all admissible binary words up
/// to `max_weight`.
#[derive(Clone, Debug)]
pub struct MzvTable {
    max_weight: u32,
    symbols: Vec<MzvSymbol>,
    single_zeta: BTreeMap<u32, CoeffElem>,
    products: BTreeMap<(MzvSymbol, MzvSymbol), CoeffElem>,
    convergent_words: HashMap<BinWord, CoeffElem>,
}

fn consistency(msg: impl Into<String>) -> Error {
    Error::Consistency(msg.into())
}

fn check_homogeneous(what: &str, c: &CoeffElem, weight: u32) -> crate::Result<()> {
    if let Some(w) = c.weights().into_iter().find(|&w| w != weight) {
        return Err(consistency(format!("{what} has a term of weight {w}, expected {weight}")));
    }
    Ok(())
}

impl MzvTable {
    /// The table compiled into the crate.
    pub fn shipped() -> Self {
        Self::parse(SHIPPED_TABLE).expect("shipped MZV table is valid")
    }

    pub fn load(mut source: impl Read) -> crate::Result<Self> {
        let mut text = String::new();
        source.read_to_string(&mut text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::parse(&text)
    }

    pub fn load_path(path: &std::path::Path) -> crate::Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::load(f)
    }

    pub fn parse(text: &str) -> crate::Result<Self> {
        let doc: TableDoc = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.version != SUPPORTED_VERSION {
            return Err(Error::Parse(format!("unsupported table version {}", doc.version)));
        }
        let max_weight = doc.max_weight;

        let mut symbols = Vec::new();
        for s in &doc.symbols {
            let sym = MzvSymbol::parse(&s.name)
                .ok_or_else(|| Error::Parse(format!("bad symbol name {:?}", s.name)))?;
            if sym.weight() != s.weight {
                return Err(consistency(format!("symbol {} declared with weight {}", s.name, s.weight)));
            }
            if s.weight > max_weight {
                return Err(consistency(format!("symbol {} exceeds max_weight", s.name)));
            }
            if s.weight % 2 == 0 && !s.name.contains('_') {
                return Err(consistency(format!("even single zeta {} must be reduced to pi powers", s.name)));
            }
            symbols.push(sym);
        }
        symbols.sort();
        symbols.dedup();

        let known = |c: &CoeffElem, what: &str| -> crate::Result<()> {
            for (m, _) in c.iter() {
                for s in m.symbols() {
                    if !symbols.contains(s) {
                        return Err(consistency(format!("{what} uses undeclared symbol {}", s.name())));
                    }
                }
            }
            Ok(())
        };

        let mut single_zeta = BTreeMap::new();
        for (k, v) in &doc.single_zeta {
            let s: u32 = k.parse().map_err(|_| Error::Parse(format!("bad single_zeta key {k:?}")))?;
            if s < 2 || s > max_weight {
                return Err(consistency(format!("single_zeta({s}) outside 2..={max_weight}")));
            }
            let c = CoeffElem::parse(v)?;
            known(&c, &format!("single_zeta({s})"))?;
            check_homogeneous(&format!("single_zeta({s})"), &c, s)?;
            if s.is_multiple_of(2) && c != reduce_even_zeta(s) {
                return Err(consistency(format!("single_zeta({s}) disagrees with the Bernoulli formula")));
            }
            single_zeta.insert(s, c);
        }
        if max_weight >= 2 && !single_zeta.contains_key(&2) {
            return Err(consistency("missing single_zeta(2)"));
        }
        for s in 2..=max_weight {
            if !single_zeta.contains_key(&s) {
                return Err(consistency(format!("missing single_zeta({s})")));
            }
        }

        let mut products = BTreeMap::new();
        for (k, v) in &doc.products {
            let (a, b) = k
                .split_once('*')
                .ok_or_else(|| Error::Parse(format!("product key {k:?} is not of the form a*b")))?;
            let (a, b) = match (MzvSymbol::parse(a.trim()), MzvSymbol::parse(b.trim())) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::Parse(format!("bad product key {k:?}"))),
            };
            if !symbols.contains(&a) || !symbols.contains(&b) {
                return Err(consistency(format!("product {k} uses undeclared symbols")));
            }
            let c = CoeffElem::parse(v)?;
            known(&c, &format!("product {k}"))?;
            check_homogeneous(&format!("product {k}"), &c, a.weight() + b.weight())?;
            if a.weight() + b.weight() > max_weight {
                return Err(consistency(format!("product {k} exceeds max_weight")));
            }
            let key = if a <= b { (a, b) } else { (b, a) };
            products.insert(key, c);
        }

        let mut convergent_words = HashMap::new();
        for (k, v) in &doc.convergent_words {
            let w = BinWord::parse(k)?;
            if !w.is_admissible() {
                return Err(consistency(format!("word {k} is not admissible")));
            }
            if w.len() as u32 > max_weight {
                return Err(consistency(format!("word {k} exceeds max_weight")));
            }
            let c = CoeffElem::parse(v)?;
            known(&c, &format!("word {k}"))?;
            check_homogeneous(&format!("word {k}"), &c, w.len() as u32)?;
            convergent_words.insert(w, c);
        }
        for weight in 2..=max_weight {
            for w in BinWord::admissible(weight as usize) {
                if !convergent_words.contains_key(&w) {
                    return Err(consistency(format!("missing convergent word {w}")));
                }
            }
            // zeta(s) <-> A^{s-1} B
            let depth_one = BinWord::depth_one(weight as usize);
            if convergent_words[&depth_one] != single_zeta[&weight] {
                return Err(consistency(format!("word {depth_one} disagrees with single_zeta({weight})")));
            }
        }

        Ok(MzvTable { max_weight, symbols, single_zeta, products, convergent_words })
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn symbols(&self) -> &[MzvSymbol] {
        &self.symbols
    }

    pub fn symbol(&self, name: &str) -> Option<&MzvSymbol> {
        self.symbols.iter().find(|s| s.name() == name)
    }

    /// `zeta(s)` in the basis.
    pub fn zeta(&self, s: u32) -> crate::Result<CoeffElem> {
        if s < 2 {
            return Err(Error::PreconditionViolated(format!("zeta({s}) diverges")));
        }
        if s.is_multiple_of(2) {
            return Ok(reduce_even_zeta(s));
        }
        self.single_zeta
            .get(&s)
            .cloned()
            .ok_or(Error::TableOverflow { needed: s, max_weight: self.max_weight })
    }

    /// Value of an admissible word.
    pub fn convergent(&self, w: &BinWord) -> crate::Result<CoeffElem> {
        if w.len() as u32 > self.max_weight {
            return Err(Error::TableOverflow { needed: w.len() as u32, max_weight: self.max_weight });
        }
        self.convergent_words
            .get(w)
            .cloned()
            .ok_or_else(|| Error::PreconditionViolated(format!("word {w} is not admissible")))
    }

    /// Applies product rules until no rule matches; fails if a product of
    /// symbols exceeds `max_weight`.
    pub fn normalize(&self, x: &CoeffElem) -> crate::Result<CoeffElem> {
        let mut out = CoeffElem::zero();
        let mut work: Vec<(MzvMonomial, crate::Rational)> =
            x.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        while let Some((m, c)) = work.pop() {
            if c.is_zero() {
                continue;
            }
            if m.symbols().len() >= 2 && m.symbol_weight() > self.max_weight {
                return Err(Error::TableOverflow { needed: m.symbol_weight(), max_weight: self.max_weight });
            }
            match self.find_rule(&m) {
                Some((i, j, rule)) => {
                    let rest = m.without(i, j);
                    for (rm, rc) in rule.iter() {
                        work.push((rest.mul(rm), &c * rc));
                    }
                }
                None => out.add_term(m, c),
            }
        }
        Ok(out)
    }

    fn find_rule(&self, m: &MzvMonomial) -> Option<(usize, usize, &CoeffElem)> {
        if self.products.is_empty() {
            return None;
        }
        let syms = m.symbols();
        for i in 0..syms.len() {
            for j in i + 1..syms.len() {
                if let Some(rule) = self.products.get(&(syms[i].clone(), syms[j].clone())) {
                    // a rule mapping a product to itself is a no-op declaration
                    let same = rule.len() == 1
                        && rule.iter().next().map(|(rm, rc)| {
                            rm == &MzvMonomial::new(0, vec![syms[i].clone(), syms[j].clone()]) && rc == &crate::int(1)
                        }) == Some(true);
                    if !same {
                        return Some((i, j, rule));
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{coeff_mul, rat};

    #[test]
    fn shipped_table_loads() {
        let t = MzvTable::shipped();
        assert_eq!(t.max_weight(), 8);
        assert_eq!(t.zeta(2).unwrap(), CoeffElem::pi_power(2).scale(&rat(-1, 24)));
        assert_eq!(t.symbols().len(), 4);
        assert_eq!(t.convergent(&BinWord::parse("ABB").unwrap()).unwrap().to_string(), "z3");
    }

    #[test]
    fn empty_table() {
        let t = MzvTable::parse("version = 1\nmax_weight = 0\n").unwrap();
        assert_eq!(t.max_weight(), 0);
        assert!(t.symbols().is_empty());
        let one = CoeffElem::one();
        assert_eq!(t.normalize(&one).unwrap(), one);
    }

    #[test]
    fn missing_zeta_two() {
        let doc = "version = 1\nmax_weight = 2\n[convergent_words]\nAB = \"-1/24*pi^2\"\n";
        assert!(matches!(MzvTable::parse(doc), Err(Error::Consistency(_))));
    }

    #[test]
    fn wrong_even_zeta() {
        let doc = "version = 1\nmax_weight = 2\n[single_zeta]\n\"2\" = \"1/6*pi^2\"\n[convergent_words]\nAB = \"1/6*pi^2\"\n";
        assert!(matches!(MzvTable::parse(doc), Err(Error::Consistency(_))));
    }

    #[test]
    fn weight_mismatch() {
        let doc = SHIPPED_TABLE.replace("AAB = \"z3\"", "AAB = \"z5\"");
        assert!(matches!(MzvTable::parse(&doc), Err(Error::Consistency(_))));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(MzvTable::parse("not toml ["), Err(Error::Parse(_))));
        assert!(matches!(MzvTable::parse("version = 2\nmax_weight = 0\n"), Err(Error::Parse(_))));
    }

    #[test]
    fn products_and_overflow() {
        let t = MzvTable::shipped();
        let z3 = CoeffElem::symbol(MzvSymbol::parse("z3").unwrap());
        let z5 = CoeffElem::symbol(MzvSymbol::parse("z5").unwrap());
        assert_eq!(coeff_mul(&z3, &z3, &t).unwrap().to_string(), "z3^2");
        assert_eq!(coeff_mul(&z3, &z5, &t).unwrap().to_string(), "z3*z5");
        let p2 = CoeffElem::pi_power(2);
        assert_eq!(coeff_mul(&p2, &p2, &t).unwrap().to_string(), "pi^4");
        let z3sq = &z3 * &z3;
        assert!(matches!(coeff_mul(&z3sq, &z3, &t), Err(Error::TableOverflow { .. })));
        assert!(matches!(t.zeta(9), Err(Error::TableOverflow { .. })));
    }

    #[test]
    fn product_rules_rewrite() {
        let doc = "version = 1\nmax_weight = 6\n\
            [[symbols]]\nname = \"z3\"\nweight = 3\n[[symbols]]\nname = \"z5\"\nweight = 5\n\
            [single_zeta]\n\"2\" = \"-1/24*pi^2\"\n\"3\" = \"z3\"\n\"4\" = \"1/1440*pi^4\"\n\"5\" = \"z5\"\n\"6\" = \"-1/60480*pi^6\"\n\
            [products]\n\"z3*z3\" = \"7*pi^6\"\n";
        let mut text = doc.to_string();
        text.push_str("[convergent_words]\n");
        let full = MzvTable::shipped();
        for w in 2..=6 {
            for word in BinWord::admissible(w) {
                let v = full.convergent(&word).unwrap().to_string().replace("z3^2", "7*pi^6");
                let v = CoeffElem::parse(&v).unwrap();
                text.push_str(&format!("{word} = \"{v}\"\n"));
            }
        }
        let t = MzvTable::parse(&text).unwrap();
        let z3 = CoeffElem::symbol(MzvSymbol::parse("z3").unwrap());
        assert_eq!(coeff_mul(&z3, &z3, &t).unwrap().to_string(), "7*pi^6");
    }
}
