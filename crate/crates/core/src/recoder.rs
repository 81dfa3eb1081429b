//! Sliding-block recoding onto the alphabet of length-`n0` words.
//!
//! The recoded system `Y` has one symbol per word of `L_{n0}(X)`; the point
//! `x` maps to the sequence whose `j`-th symbol is `x_j ⋯ x_{j+n0-1}`. The
//! block length `n0` is the least one for which no admissible `n0`-word can
//! recur at distance 1 to 4, which forces every `Y`-word of length five to
//! have five distinct symbols.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::subshift::{Alphabet, FactorCache, FactorSet, LanguageOracle, Symbol, Word};

pub const DEFAULT_N0_CEILING: usize = 32;

/// Least `n0 ≥ 1` such that no word of `L_{n0+4}` contains the same
/// `n0`-word at position 0 and at a position `i ∈ 1..=4`.
pub fn find_n0(oracle: &dyn LanguageOracle, ceiling: usize) -> Result<usize> {
    for n in 1..=ceiling {
        let long = oracle.factors(n + 4);
        let clash = long
            .iter()
            .any(|x| (1..=4).any(|i| x[..n] == x[i..i + n]));
        if !clash {
            return Ok(n);
        }
    }
    Err(Error::SearchCeilingExceeded {
        what: "n0",
        ceiling,
    })
}

/// The conjugate system over `B = L_{n0}(X)`.
#[derive(Debug)]
pub struct RecodedSubshift {
    base: Arc<dyn LanguageOracle>,
    n0: usize,
    blocks: Vec<Word>,
    block_index: HashMap<Word, Symbol>,
    alphabet: Alphabet,
    cache: FactorCache,
}

impl RecodedSubshift {
    pub fn new(base: Arc<dyn LanguageOracle>, ceiling: usize) -> Result<Self> {
        let n0 = find_n0(base.as_ref(), ceiling)?;
        Self::with_block_length(base, n0)
    }

    /// Recodes with a given block length, without checking condition (†).
    pub fn with_block_length(base: Arc<dyn LanguageOracle>, n0: usize) -> Result<Self> {
        if n0 == 0 {
            return Err(Error::InvalidAlphabet("block length must be positive".into()));
        }
        // FactorSet is sorted lexicographically, which fixes the B order.
        let blocks: Vec<Word> = base.factors(n0).words().to_vec();
        if blocks.len() > Symbol::MAX as usize {
            return Err(Error::InvalidAlphabet("recoded alphabet too large".into()));
        }
        let block_index = blocks
            .iter()
            .enumerate()
            .map(|(k, w)| (w.clone(), k as Symbol))
            .collect();
        let alphabet = Alphabet::indexed(blocks.len())?;
        Ok(RecodedSubshift {
            base,
            n0,
            blocks,
            block_index,
            alphabet,
            cache: FactorCache::default(),
        })
    }

    pub fn base(&self) -> &Arc<dyn LanguageOracle> {
        &self.base
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    /// The `X`-words naming the `B`-symbols, in symbol order.
    pub fn blocks(&self) -> &[Word] {
        &self.blocks
    }

    pub fn block(&self, s: Symbol) -> &[Symbol] {
        &self.blocks[s as usize]
    }

    /// Overlaps consecutive block words into an `X`-word of length
    /// `|z| + n0 - 1`.
    pub fn decode_word(&self, z: &[Symbol]) -> Result<Word> {
        let render = || crate::subshift::index_list(z);
        let Some((&first, rest)) = z.split_first() else {
            return Ok(Vec::new());
        };
        let lookup = |s: Symbol| {
            self.blocks
                .get(s as usize)
                .ok_or_else(|| Error::NotInLanguage(render()))
        };
        let mut out = lookup(first)?.to_vec();
        for &s in rest {
            let block = lookup(s)?;
            if block[..self.n0 - 1] != out[out.len() - (self.n0 - 1)..] {
                return Err(Error::NotInLanguage(render()));
            }
            out.push(block[self.n0 - 1]);
        }
        if !self.base.contains(&out) {
            return Err(Error::NotInLanguage(render()));
        }
        Ok(out)
    }

    /// Sliding windows of length `n0`.
    pub fn encode_word(&self, w: &[Symbol]) -> Result<Word> {
        if w.len() < self.n0 {
            return Err(Error::TooShort {
                len: w.len(),
                min: self.n0,
            });
        }
        if !self.base.contains(w) {
            return Err(Error::NotInLanguage(self.base.alphabet().render(w)));
        }
        Ok(self.encode_unchecked(w))
    }

    fn encode_unchecked(&self, w: &[Symbol]) -> Word {
        w.windows(self.n0)
            .map(|b| self.block_index[b])
            .collect()
    }
}

impl LanguageOracle for RecodedSubshift {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn factors(&self, m: usize) -> Arc<FactorSet> {
        self.cache.get_or_insert_with(m, || {
            if m == 0 {
                return FactorSet::from_words([Vec::new()]);
            }
            let source = self.base.factors(m + self.n0 - 1);
            FactorSet::from_words(source.iter().map(|w| self.encode_unchecked(w)))
        })
    }

    fn contains(&self, z: &[Symbol]) -> bool {
        z.is_empty() || self.decode_word(z).is_ok()
    }
}

/// Convenience: wrap a substitution subshift and recode it.
pub fn recode(base: Arc<dyn LanguageOracle>) -> Result<RecodedSubshift> {
    RecodedSubshift::new(base, DEFAULT_N0_CEILING)
}
