use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::symbol::{is_symbol_char, Alphabet, Symbol, Word};

/// A homomorphism `Σ → Σ*`, given as one image per alphabet symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomTable {
    name: String,
    images: BTreeMap<Symbol, Word>,
}

impl HomTable {
    pub fn new(name: &str, images: BTreeMap<Symbol, Word>) -> Self {
        HomTable {
            name: name.to_string(),
            images,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn image(&self, s: Symbol) -> &[Symbol] {
        self.images.get(&s).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn images(&self) -> impl Iterator<Item = (Symbol, &[Symbol])> {
        self.images.iter().map(|(s, w)| (*s, w.as_slice()))
    }

    pub fn is_erasing(&self) -> bool {
        self.images.values().any(Vec::is_empty)
    }

    pub fn max_image_len(&self) -> usize {
        self.images.values().map(Vec::len).max().unwrap_or(0)
    }

    pub fn apply(&self, w: &[Symbol]) -> Word {
        w.iter().flat_map(|&s| self.image(s).iter().copied()).collect()
    }
}

/// Contents of a definitions file: the alphabet and named homomorphisms.
///
/// ```text
/// # comment
/// alphabet: a b c
/// hom H: a -> bb, b -> a, c -> @e
/// ```
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Definitions {
    pub alphabet: Alphabet,
    pub homs: BTreeMap<String, HomTable>,
}

impl Definitions {
    pub fn with_alphabet(alphabet: Alphabet) -> Self {
        Definitions {
            alphabet,
            homs: BTreeMap::new(),
        }
    }

    pub fn hom(&self, name: &str) -> Option<&HomTable> {
        self.homs.get(name)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let err = |line: usize, msg: String| Error::Definitions { line, msg };
        let mut alphabet: Option<Alphabet> = None;
        // (line, table name, (symbol, image) pairs as written)
        type RawTable = (usize, String, Vec<(String, String)>);
        let mut raw_homs: Vec<RawTable> = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (head, body) = line
                .split_once(':')
                .ok_or_else(|| err(line_no, format!("expected `key: value`, got `{line}`")))?;
            let head = head.trim();
            if head == "alphabet" {
                if alphabet.is_some() {
                    return Err(err(line_no, "alphabet declared twice".into()));
                }
                alphabet = Some(Alphabet::parse(body).map_err(|e| match e {
                    Error::Definitions { msg, .. } => err(line_no, msg),
                    other => other,
                })?);
            } else if let Some(name) = head.strip_prefix("hom ") {
                let name = name.trim();
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    return Err(err(line_no, format!("bad homomorphism name `{name}`")));
                }
                let mut pairs = Vec::new();
                for entry in body.split(',') {
                    let (from, to) = entry
                        .split_once("->")
                        .ok_or_else(|| err(line_no, format!("expected `x -> w`, got `{}`", entry.trim())))?;
                    pairs.push((from.trim().to_string(), to.trim().to_string()));
                }
                raw_homs.push((line_no, name.to_string(), pairs));
            } else {
                return Err(err(line_no, format!("unknown directive `{head}`")));
            }
        }

        let alphabet = alphabet.unwrap_or_default();
        let mut homs = BTreeMap::new();
        for (line_no, name, pairs) in raw_homs {
            if homs.contains_key(&name) {
                return Err(err(line_no, format!("homomorphism `{name}` defined twice")));
            }
            let mut images = BTreeMap::new();
            for (from, to) in pairs {
                let mut chars = from.chars();
                let sym = match (chars.next(), chars.next()) {
                    (Some(c), None) => Symbol(c),
                    _ => return Err(err(line_no, format!("`{from}` is not a single symbol"))),
                };
                if !alphabet.contains(sym) {
                    return Err(err(line_no, format!("`{from}` is not in the alphabet")));
                }
                let image: Word = if to == "@e" || to.is_empty() {
                    Vec::new()
                } else {
                    to.chars().map(Symbol).collect()
                };
                if let Some(bad) = image.iter().find(|s| !is_symbol_char(s.0) || !alphabet.contains(**s)) {
                    return Err(err(line_no, format!("image symbol `{bad}` is not in the alphabet")));
                }
                if images.insert(sym, image).is_some() {
                    return Err(err(line_no, format!("`{from}` mapped twice in `{name}`")));
                }
            }
            if let Some(missing) = alphabet.symbols().iter().find(|s| !images.contains_key(s)) {
                return Err(err(line_no, format!("`{name}` has no image for `{missing}`")));
            }
            homs.insert(name.clone(), HomTable::new(&name, images));
        }
        Ok(Definitions { alphabet, homs })
    }
}
