//! Token-level n-gram language models and perplexity.
//!
//! Perplexity of a sequence `S` of `n` tokens under a model is
//! `exp(-(1/n) * sum_i ln P(w_i | w_{<i}))`, conditioning each token on at
//! most `order - 1` predecessors.
//!
//! # Smoothing
//!
//! Conditional probabilities interpolate add-k estimates with the next
//! lower order, so a hand oracle can reproduce them from raw counts:
//!
//! ```text
//! P_1(w)     = (c_1(w) + k) / (N_1 + k * V)
//! P_m(w | h) = lambda_h * (c_m(h, w) + k) / (C_m(h) + k * V)
//!              + (1 - lambda_h) * P_{m-1}(w | tail(h))
//! lambda_h   = C_m(h) / (C_m(h) + beta)
//! ```
//!
//! where `c_m` are the order-`m` counts, `C_m(h)` the total count of context
//! `h`, `V` the vocabulary size including the unknown token, `k` the add-k
//! constant (default 0.01) and `beta` the backoff strength (default 1.0).
//! Conditionals sum to one over the vocabulary for every context, and with
//! `k > 0` no probability is ever zero.
//!
//! Tokens seen fewer than `min_count` times in training (default 2) are
//! mapped to the unknown token, as are out-of-vocabulary query tokens. Each
//! file is one sequence: `order - 1` begin-of-sequence sentinels pad the
//! left context and nothing crosses file boundaries.

use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use thiserror::Error;

/// Token id. 0 is the unknown token, 1 the begin-of-sequence sentinel.
pub type TokenId = u32;

pub const UNK: TokenId = 0;
pub const BOS: TokenId = 1;
const FIRST_REAL_ID: TokenId = 2;

const MAGIC: &[u8; 8] = b"DLNGRAM\x01";
const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum NgramError {
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("input token sequence is empty")]
    EmptyInput,
    #[error("model order must be at least 1")]
    BadOrder,
    #[error("unsupported model format version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("corrupt model file: {0}")]
    CorruptModel(String),
}

/// Smoothing configuration: method tag plus constants.
#[derive(Debug, Clone, PartialEq)]
pub struct Smoothing {
    /// Add-k constant applied at every order.
    pub add_k: f64,
    /// Backoff strength `beta`; larger values lean harder on lower orders.
    pub backoff: f64,
    /// Tokens seen fewer than this many times in training become unknown.
    pub min_count: u32,
}

impl Default for Smoothing {
    fn default() -> Self {
        Smoothing {
            add_k: 0.01,
            backoff: 1.0,
            min_count: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
struct ContextEntry {
    total: u64,
    counts: BTreeMap<TokenId, u64>,
}

/// An immutable trained model, safe for concurrent scoring.
#[derive(Debug, Clone, PartialEq)]
pub struct NgramModel {
    order: usize,
    smoothing: Smoothing,
    /// Sorted vocabulary text for ids starting at [`FIRST_REAL_ID`].
    vocab_texts: Vec<String>,
    vocab_ids: BTreeMap<String, TokenId>,
    /// `tables[m - 1]` holds order-`m` counts keyed by the `(m-1)`-token
    /// context.
    tables: Vec<BTreeMap<Vec<TokenId>, ContextEntry>>,
}

/// Perplexity value along with the number of scored tokens.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerplexityScore {
    pub value: f64,
    pub token_count: usize,
}

impl NgramModel {
    /// Train a model of the given order on a corpus of token streams.
    ///
    /// Counts are accumulated per stream and are therefore invariant to the
    /// order of streams in the corpus.
    pub fn train(
        corpus: &[Vec<String>],
        order: usize,
        smoothing: Smoothing,
    ) -> Result<NgramModel, NgramError> {
        if order < 1 {
            return Err(NgramError::BadOrder);
        }
        if corpus.is_empty() || corpus.iter().all(|s| s.is_empty()) {
            return Err(NgramError::EmptyCorpus);
        }
        // First pass: raw frequencies decide the vocabulary.
        let mut raw: BTreeMap<&str, u64> = BTreeMap::new();
        for stream in corpus {
            for tok in stream {
                *raw.entry(tok.as_str()).or_insert(0) += 1;
            }
        }
        let mut vocab_texts: Vec<String> = raw
            .iter()
            .filter(|(_, c)| **c >= smoothing.min_count as u64)
            .map(|(t, _)| t.to_string())
            .collect();
        vocab_texts.sort_unstable();
        let vocab_ids: BTreeMap<String, TokenId> = vocab_texts
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), FIRST_REAL_ID + i as TokenId))
            .collect();

        // Second pass: n-gram tables over mapped ids.
        let mut tables: Vec<BTreeMap<Vec<TokenId>, ContextEntry>> = vec![BTreeMap::new(); order];
        for stream in corpus {
            if stream.is_empty() {
                continue;
            }
            let ids: Vec<TokenId> = stream
                .iter()
                .map(|t| vocab_ids.get(t).copied().unwrap_or(UNK))
                .collect();
            for (i, &token) in ids.iter().enumerate() {
                for m in 1..=order {
                    let needed = m - 1;
                    // Left context, padded with sentinels before the start.
                    let mut context = vec![BOS; needed.saturating_sub(i)];
                    let tail_len = needed - context.len();
                    context.extend_from_slice(&ids[i - tail_len..i]);
                    let entry = tables[m - 1].entry(context).or_default();
                    entry.total += 1;
                    *entry.counts.entry(token).or_insert(0) += 1;
                }
            }
        }
        Ok(NgramModel {
            order,
            smoothing,
            vocab_texts,
            vocab_ids,
            tables,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn smoothing(&self) -> &Smoothing {
        &self.smoothing
    }

    /// Number of predictable token types, including the unknown token.
    pub fn vocab_size(&self) -> usize {
        self.vocab_texts.len() + 1
    }

    /// Map token text to its id, unknown tokens included.
    pub fn token_id(&self, text: &str) -> TokenId {
        self.vocab_ids.get(text).copied().unwrap_or(UNK)
    }

    /// Raw count of `(context, token)` at order `context.len() + 1`.
    pub fn count(&self, context: &[TokenId], token: TokenId) -> u64 {
        self.tables
            .get(context.len())
            .and_then(|t| t.get(context))
            .and_then(|e| e.counts.get(&token).copied())
            .unwrap_or(0)
    }

    /// Total count of a context at order `context.len() + 1`.
    pub fn context_total(&self, context: &[TokenId]) -> u64 {
        self.tables
            .get(context.len())
            .and_then(|t| t.get(context))
            .map(|e| e.total)
            .unwrap_or(0)
    }

    /// Contexts stored at the given order (context length `order - 1`).
    pub fn contexts(&self, order: usize) -> impl Iterator<Item = &[TokenId]> {
        self.tables
            .get(order.saturating_sub(1))
            .into_iter()
            .flat_map(|t| t.keys().map(Vec::as_slice))
    }

    /// Smoothed conditional probability of `token` after `context`.
    ///
    /// `context` may be any length; only the last `order - 1` ids are used.
    pub fn conditional(&self, context: &[TokenId], token: TokenId) -> f64 {
        let start = context.len().saturating_sub(self.order - 1);
        self.conditional_at(&context[start..], token)
    }

    fn conditional_at(&self, context: &[TokenId], token: TokenId) -> f64 {
        let v = self.vocab_size() as f64;
        let k = self.smoothing.add_k;
        if context.is_empty() {
            let total = self.context_total(&[]) as f64;
            let count = self.count(&[], token) as f64;
            let denom = total + k * v;
            if denom == 0.0 {
                return 0.0;
            }
            return (count + k) / denom;
        }
        let total = self.context_total(context) as f64;
        let lower = self.conditional_at(&context[1..], token);
        if total == 0.0 {
            return lower;
        }
        let lambda = total / (total + self.smoothing.backoff);
        let count = self.count(context, token) as f64;
        lambda * (count + k) / (total + k * v) + (1.0 - lambda) * lower
    }

    /// Perplexity of a token stream. Out-of-vocabulary tokens map to the
    /// unknown token; the left context is padded with sentinels.
    pub fn perplexity<S: AsRef<str>>(&self, tokens: &[S]) -> Result<PerplexityScore, NgramError> {
        if tokens.is_empty() {
            return Err(NgramError::EmptyInput);
        }
        let ids: Vec<TokenId> = tokens
            .iter()
            .map(|t| self.token_id(t.as_ref()))
            .collect();
        let mut log_sum = 0.0f64;
        let history = self.order - 1;
        let mut context: Vec<TokenId> = vec![BOS; history];
        for &id in &ids {
            let p = self.conditional_at(&context, id);
            log_sum += p.ln();
            if history > 0 {
                context.remove(0);
                context.push(id);
            }
        }
        let value = (-log_sum / ids.len() as f64).exp();
        Ok(PerplexityScore {
            value,
            token_count: ids.len(),
        })
    }

    // ---- serialization ---------------------------------------------------

    /// Serialize deterministically: identical models produce identical bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut payload = Vec::new();
        write_u32(&mut payload, self.order as u32);
        write_f64(&mut payload, self.smoothing.add_k);
        write_f64(&mut payload, self.smoothing.backoff);
        write_u32(&mut payload, self.smoothing.min_count);
        write_u32(&mut payload, self.vocab_texts.len() as u32);
        for text in &self.vocab_texts {
            write_str(&mut payload, text);
        }
        for table in &self.tables {
            write_u64(&mut payload, table.len() as u64);
            for (context, entry) in table {
                write_u32(&mut payload, context.len() as u32);
                for id in context {
                    write_u32(&mut payload, *id);
                }
                write_u64(&mut payload, entry.total);
                write_u64(&mut payload, entry.counts.len() as u64);
                for (tok, count) in &entry.counts {
                    write_u32(&mut payload, *tok);
                    write_u64(&mut payload, *count);
                }
            }
        }
        let mut out = Vec::with_capacity(payload.len() + 44);
        out.extend_from_slice(MAGIC);
        let mut version = Vec::new();
        write_u32(&mut version, FORMAT_VERSION);
        out.extend_from_slice(&version);
        out.extend_from_slice(&payload);
        let digest = Sha256::digest(&payload);
        out.extend_from_slice(&digest);
        out
    }

    /// Deserialize a model produced by [`NgramModel::to_bytes`].
    pub fn from_bytes(bytes: &[u8]) -> Result<NgramModel, NgramError> {
        let mut r = Reader::new(bytes);
        let magic = r.take(8)?;
        if magic != MAGIC {
            return Err(NgramError::CorruptModel("bad magic".to_string()));
        }
        let version = r.u32()?;
        if version != FORMAT_VERSION {
            return Err(NgramError::VersionMismatch {
                found: version,
                expected: FORMAT_VERSION,
            });
        }
        let payload_start = r.pos;
        if bytes.len() < payload_start + 32 {
            return Err(NgramError::CorruptModel("truncated".to_string()));
        }
        let payload = &bytes[payload_start..bytes.len() - 32];
        let digest_stored = &bytes[bytes.len() - 32..];
        let digest = Sha256::digest(payload);
        if digest.as_slice() != digest_stored {
            return Err(NgramError::CorruptModel("checksum mismatch".to_string()));
        }
        let mut r = Reader::new(payload);
        let order = r.u32()? as usize;
        if order < 1 {
            return Err(NgramError::CorruptModel("order of zero".to_string()));
        }
        let smoothing = Smoothing {
            add_k: r.f64()?,
            backoff: r.f64()?,
            min_count: r.u32()?,
        };
        let vocab_len = r.u32()? as usize;
        let mut vocab_texts = Vec::with_capacity(vocab_len);
        for _ in 0..vocab_len {
            vocab_texts.push(r.string()?);
        }
        let vocab_ids: BTreeMap<String, TokenId> = vocab_texts
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), FIRST_REAL_ID + i as TokenId))
            .collect();
        if vocab_ids.len() != vocab_texts.len() {
            return Err(NgramError::CorruptModel("duplicate vocab entry".to_string()));
        }
        let mut tables = Vec::with_capacity(order);
        for m in 1..=order {
            let n_contexts = r.u64()? as usize;
            let mut table = BTreeMap::new();
            for _ in 0..n_contexts {
                let ctx_len = r.u32()? as usize;
                if ctx_len != m - 1 {
                    return Err(NgramError::CorruptModel(format!(
                        "context length {ctx_len} at order {m}"
                    )));
                }
                let mut context = Vec::with_capacity(ctx_len);
                for _ in 0..ctx_len {
                    context.push(r.u32()?);
                }
                let total = r.u64()?;
                let n_counts = r.u64()? as usize;
                let mut counts = BTreeMap::new();
                let mut sum = 0u64;
                for _ in 0..n_counts {
                    let tok = r.u32()?;
                    let count = r.u64()?;
                    sum += count;
                    counts.insert(tok, count);
                }
                if sum != total {
                    return Err(NgramError::CorruptModel(
                        "context total does not match counts".to_string(),
                    ));
                }
                table.insert(context, ContextEntry { total, counts });
            }
            tables.push(table);
        }
        if !r.at_end() {
            return Err(NgramError::CorruptModel("trailing bytes".to_string()));
        }
        Ok(NgramModel {
            order,
            smoothing,
            vocab_texts,
            vocab_ids,
            tables,
        })
    }
}

fn write_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn write_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn write_f64(out: &mut Vec<u8>, v: f64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn write_str(out: &mut Vec<u8>, s: &str) {
    write_u32(out, s.len() as u32);
    out.extend_from_slice(s.as_bytes());
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Reader { bytes, pos: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], NgramError> {
        if self.pos + n > self.bytes.len() {
            return Err(NgramError::CorruptModel("unexpected end".to_string()));
        }
        let slice = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn u32(&mut self) -> Result<u32, NgramError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, NgramError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64, NgramError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn string(&mut self) -> Result<String, NgramError> {
        let len = self.u32()? as usize;
        let bytes = self.take(len)?;
        String::from_utf8(bytes.to_vec())
            .map_err(|_| NgramError::CorruptModel("invalid utf-8".to_string()))
    }

    fn at_end(&self) -> bool {
        self.pos == self.bytes.len()
    }
}

/// Perplexity of a sequence given its per-token conditional probabilities.
/// Exposed for oracle-style tests.
pub fn perplexity_of_probs(probs: &[f64]) -> Result<f64, NgramError> {
    if probs.is_empty() {
        return Err(NgramError::EmptyInput);
    }
    let log_sum: f64 = probs.iter().map(|p| p.ln()).sum();
    Ok((-log_sum / probs.len() as f64).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stream(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    #[test]
    fn empty_corpus_is_rejected() {
        assert!(matches!(
            NgramModel::train(&[], 2, Smoothing::default()),
            Err(NgramError::EmptyCorpus)
        ));
        assert!(matches!(
            NgramModel::train(&[vec![]], 2, Smoothing::default()),
            Err(NgramError::EmptyCorpus)
        ));
        assert!(matches!(
            NgramModel::train(&[stream("a b")], 0, Smoothing::default()),
            Err(NgramError::BadOrder)
        ));
    }

    #[test]
    fn bigram_counts_match_hand_counts() {
        // Corpus [a b a b]: count(a -> b) = 2, count(b -> a) = 1.
        let smoothing = Smoothing {
            min_count: 1,
            ..Smoothing::default()
        };
        let model = NgramModel::train(&[stream("a b a b")], 2, smoothing).unwrap();
        let a = model.token_id("a");
        let b = model.token_id("b");
        assert_ne!(a, UNK);
        assert_eq!(model.count(&[a], b), 2);
        assert_eq!(model.count(&[b], a), 1);
        assert_eq!(model.count(&[b], b), 0);
        assert_eq!(model.count(&[BOS], a), 1);
    }

    #[test]
    fn permutation_invariance_is_byte_exact() {
        let s1 = stream("a b c a b");
        let s2 = stream("c c b a");
        let m1 = NgramModel::train(&[s1.clone(), s2.clone()], 3, Smoothing::default()).unwrap();
        let m2 = NgramModel::train(&[s2, s1], 3, Smoothing::default()).unwrap();
        assert_eq!(m1.to_bytes(), m2.to_bytes());
    }

    #[test]
    fn repeated_token_with_exact_estimates_gives_perplexity_one() {
        // k = 0 disables the add-k floor, so the single-token corpus puts
        // probability one on its token.
        let smoothing = Smoothing {
            add_k: 0.0,
            backoff: 1.0,
            min_count: 2,
        };
        let model = NgramModel::train(&[stream("a a a a")], 1, smoothing).unwrap();
        let score = model.perplexity(&["a", "a", "a"]).unwrap();
        assert!((score.value - 1.0).abs() < 1e-12);
        assert_eq!(score.token_count, 3);
    }

    #[test]
    fn uniform_unigram_perplexity_equals_vocab_size() {
        // a, b, c seen twice; x, y are singletons and merge into the unknown
        // token, which therefore also has count 2. All four types uniform.
        let model = NgramModel::train(&[stream("a a b b c c x y")], 1, Smoothing::default()).unwrap();
        assert_eq!(model.vocab_size(), 4);
        let score = model.perplexity(&["a", "b", "c", "z"]).unwrap();
        assert!(
            (score.value - 4.0).abs() < 1e-9,
            "perplexity {} should equal vocabulary size 4",
            score.value
        );
    }

    #[test]
    fn conditionals_sum_to_one_for_every_context() {
        let corpus = vec![stream("a b a c a b b"), stream("b c a a")];
        let model = NgramModel::train(&corpus, 3, Smoothing::default()).unwrap();
        let vocab: Vec<TokenId> = (0..model.vocab_size() as TokenId + 1).collect();
        let mut checked = 0;
        for order in 1..=3 {
            let contexts: Vec<Vec<TokenId>> =
                model.contexts(order).map(<[TokenId]>::to_vec).collect();
            for context in contexts {
                let sum: f64 = vocab
                    .iter()
                    .filter(|id| **id != BOS)
                    .map(|id| model.conditional(&context, *id))
                    .sum();
                assert!(
                    (sum - 1.0).abs() < 1e-9,
                    "context {context:?} sums to {sum}"
                );
                checked += 1;
            }
        }
        assert!(checked > 4);
        // Unseen context backs off and still sums to one.
        let unseen = vec![model.token_id("c"), model.token_id("c")];
        let sum: f64 = vocab
            .iter()
            .filter(|id| **id != BOS)
            .map(|id| model.conditional(&unseen, *id))
            .sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn doubling_the_corpus_preserves_top_order_count_ratios() {
        // No singletons, so the vocabulary is stable under doubling.
        let body = stream("a b a b c c a b");
        let single = NgramModel::train(&[body.clone()], 2, Smoothing::default()).unwrap();
        let doubled =
            NgramModel::train(&[body.clone(), body], 2, Smoothing::default()).unwrap();
        for context in single.contexts(2) {
            let total_s = single.context_total(context);
            let total_d = doubled.context_total(context);
            for id in 0..single.vocab_size() as TokenId + 2 {
                let c_s = single.count(context, id);
                let c_d = doubled.count(context, id);
                // Exact ratio equality via cross-multiplication.
                assert_eq!(c_s * total_d, c_d * total_s, "context {context:?} id {id}");
            }
        }
    }

    #[test]
    fn round_trip_is_bit_exact_and_score_preserving() {
        let corpus = vec![stream("x y z x y w w"), stream("y y z")];
        let model = NgramModel::train(&corpus, 4, Smoothing::default()).unwrap();
        let bytes = model.to_bytes();
        let restored = NgramModel::from_bytes(&bytes).unwrap();
        assert_eq!(restored.to_bytes(), bytes);
        let query = ["x", "y", "q", "z"];
        let a = model.perplexity(&query).unwrap().value;
        let b = restored.perplexity(&query).unwrap().value;
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn corrupt_and_mismatched_models_are_rejected() {
        let model =
            NgramModel::train(&[stream("a a b b")], 2, Smoothing::default()).unwrap();
        let mut bytes = model.to_bytes();
        let last = bytes.len() - 40;
        bytes[last] ^= 0xff;
        assert!(matches!(
            NgramModel::from_bytes(&bytes),
            Err(NgramError::CorruptModel(_))
        ));
        let mut versioned = model.to_bytes();
        versioned[8] = 9;
        assert!(matches!(
            NgramModel::from_bytes(&versioned),
            Err(NgramError::VersionMismatch { found: 9, .. })
        ));
        assert!(matches!(
            NgramModel::from_bytes(b"not a model"),
            Err(NgramError::CorruptModel(_))
        ));
    }

    #[test]
    fn perplexity_decreases_as_assigned_probability_rises() {
        let mut last = f64::INFINITY;
        for p in [0.05, 0.1, 0.3, 0.6, 0.9, 1.0] {
            let value = perplexity_of_probs(&[p, p, p]).unwrap();
            assert!(value < last);
            last = value;
        }
        assert!(matches!(
            perplexity_of_probs(&[]),
            Err(NgramError::EmptyInput)
        ));
    }

    #[test]
    fn empty_query_is_rejected() {
        let model =
            NgramModel::train(&[stream("a a b b")], 2, Smoothing::default()).unwrap();
        let empty: [&str; 0] = [];
        assert!(matches!(
            model.perplexity(&empty),
            Err(NgramError::EmptyInput)
        ));
    }
}
