//! Vocabulary sets, embedding matrices, sequence-level vocabulary merging,
//! and cosine-similarity classification of feature vectors against text
//! embeddings.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Discrete label: an index into a vocabulary, or one of two sentinels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(pub u16);

impl LabelId {
    /// Point or voxel with no transferable text label.
    pub const UNLABELED: LabelId = LabelId(0xFFFF);
    /// Voxel containing no points.
    pub const FREE: LabelId = LabelId(0xFFFE);

    pub fn is_sentinel(self) -> bool {
        self == Self::UNLABELED || self == Self::FREE
    }

    /// Vocabulary index for non-sentinel labels.
    pub fn index(self) -> Option<usize> {
        if self.is_sentinel() {
            None
        } else {
            Some(self.0 as usize)
        }
    }
}

/// Lifetime scope of a vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VocabScope {
    PerFrame,
    PerSequence,
    Dataset,
}

/// Ordered set of distinct text labels; a label's id is its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabularySet {
    labels: Vec<String>,
    pub scope: VocabScope,
}

/// Lowercase and trim; the only canonicalization applied to label strings.
pub fn canonicalize(label: &str) -> String {
    label.trim().to_lowercase()
}

impl VocabularySet {
    pub fn new<I, T>(labels: I, scope: VocabScope) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        let mut seen = HashMap::new();
        let mut out = Vec::new();
        for raw in labels {
            let canon = canonicalize(raw.as_ref());
            if canon.is_empty() {
                return Err(Error::InvalidInput("vocabulary label is empty".into()));
            }
            if seen.insert(canon.clone(), out.len()).is_some() {
                return Err(Error::InvalidInput(format!("duplicate vocabulary label '{canon}'")));
            }
            out.push(canon);
        }
        if out.len() > LabelId::FREE.0 as usize {
            return Err(Error::InvalidInput(format!(
                "vocabulary of {} labels collides with sentinel ids",
                out.len()
            )));
        }
        Ok(Self { labels: out, scope })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, id: LabelId) -> Option<&str> {
        id.index().and_then(|i| self.labels.get(i)).map(String::as_str)
    }

    pub fn id_of(&self, label: &str) -> Option<LabelId> {
        let canon = canonicalize(label);
        self.labels.iter().position(|l| *l == canon).map(|i| LabelId(i as u16))
    }

    /// Per-label translation table into `target`: labels missing from the
    /// target become `UNLABELED`. Sentinels always map to themselves.
    pub fn mapping_to(&self, target: &VocabularySet) -> Vec<LabelId> {
        self.labels
            .iter()
            .map(|l| target.id_of(l).unwrap_or(LabelId::UNLABELED))
            .collect()
    }
}

/// Merges per-frame vocabularies into one per-sequence set: the union of
/// canonicalized labels, ordered by first appearance.
pub fn merge_sequence_vocab(frames: &[VocabularySet]) -> Result<VocabularySet> {
    if frames.is_empty() {
        return Err(Error::InvalidInput("no vocabularies to merge".into()));
    }
    let mut seen = HashMap::new();
    let mut merged = Vec::new();
    for frame in frames {
        for label in &frame.labels {
            if seen.insert(label.clone(), merged.len()).is_none() {
                merged.push(label.clone());
            }
        }
    }
    Ok(VocabularySet { labels: merged, scope: VocabScope::PerSequence })
}

/// Row-major matrix of `n` embedding vectors of dimension `dim`, one row per
/// vocabulary label.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix<S: Scalar> {
    data: Vec<S>,
    dim: usize,
}

impl<S: Scalar> EmbeddingMatrix<S> {
    /// Builds from row-major data; every row must have non-zero norm.
    pub fn new(n: usize, dim: usize, data: Vec<S>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("embedding dimension must be positive".into()));
        }
        if data.len() != n * dim {
            return Err(Error::ShapeMismatch(format!(
                "embedding data length {} does not match {n} x {dim}",
                data.len()
            )));
        }
        let matrix = Self { data, dim };
        for row in 0..n {
            if norm(matrix.row(row)) == S::zero() {
                return Err(Error::ZeroNorm(format!("embedding row {row} has zero norm")));
            }
        }
        Ok(matrix)
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(S::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn norm<S: Scalar>(v: &[S]) -> S {
    dot(v, v).sqrt()
}

/// Cosine similarity; errors when either vector has zero norm.
pub fn cosine<S: Scalar>(a: &[S], b: &[S]) -> Result<S> {
    let (na, nb) = (norm(a), norm(b));
    if na == S::zero() || nb == S::zero() {
        return Err(Error::ZeroNorm("cosine of zero-norm vector is undefined".into()));
    }
    Ok(dot(a, b) / (na * nb))
}

/// Classifies a feature vector against every row of `emb` by cosine
/// similarity, returning the argmax row and its score. Ties break toward the
/// smallest label id.
pub fn classify<S: Scalar>(feature: &[S], emb: &EmbeddingMatrix<S>) -> Result<(LabelId, S)> {
    if emb.is_empty() {
        return Err(Error::InvalidInput("cannot classify against an empty embedding".into()));
    }
    if feature.len() != emb.dim() {
        return Err(Error::ShapeMismatch(format!(
            "feature dimension {} does not match embedding dimension {}",
            feature.len(),
            emb.dim()
        )));
    }
    let nf = norm(feature);
    if nf == S::zero() {
        return Err(Error::ZeroNorm("cannot classify a zero-norm feature".into()));
    }
    let mut best = (LabelId(0), S::of(f64::NEG_INFINITY));
    for (i, row) in emb.rows().enumerate() {
        let score = dot(feature, row) / (nf * norm(row));
        if score > best.1 {
            best = (LabelId(i as u16), score);
        }
    }
    Ok(best)
}

/// Returns a copy of `emb` with every row scaled to unit norm.
pub fn normalize_rows<S: Scalar>(emb: &EmbeddingMatrix<S>) -> Result<EmbeddingMatrix<S>> {
    let mut data = Vec::with_capacity(emb.data.len());
    for (i, row) in emb.rows().enumerate() {
        let n = norm(row);
        if n == S::zero() {
            return Err(Error::ZeroNorm(format!("embedding row {i} has zero norm")));
        }
        data.extend(row.iter().map(|&x| x / n));
    }
    Ok(EmbeddingMatrix { data, dim: emb.dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn per_frame(labels: &[&str]) -> VocabularySet {
        VocabularySet::new(labels.iter().copied(), VocabScope::PerFrame).unwrap()
    }

    fn random_unit_rows(rng: &mut impl Rng, n: usize, dim: usize) -> EmbeddingMatrix<f64> {
        let mut data = Vec::with_capacity(n * dim);
        for _ in 0..n {
            let row: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let n0 = norm(&row).max(1e-6);
            data.extend(row.iter().map(|x| x / n0));
        }
        EmbeddingMatrix::new(n, dim, data).unwrap()
    }

    #[test]
    fn merge_is_ordered_union() {
        let merged =
            merge_sequence_vocab(&[per_frame(&["car", "road"]), per_frame(&["car", "tree"])]).unwrap();
        assert_eq!(merged.labels(), &["car", "road", "tree"]);
        assert_eq!(merged.scope, VocabScope::PerSequence);
    }

    #[test]
    fn merge_canonicalizes() {
        let merged = merge_sequence_vocab(&[per_frame(&["Car "]), per_frame(&["car"])]).unwrap();
        assert_eq!(merged.labels(), &["car"]);
    }

    #[test]
    fn merge_empty_errors() {
        assert!(merge_sequence_vocab(&[]).is_err());
    }

    #[test]
    fn merge_matches_ordered_union_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pool = ["car", "road", "tree", "sky", "wall", "person", "bus", "pole"];
        let frames: Vec<VocabularySet> = (0..10)
            .map(|_| {
                let mut picked = Vec::new();
                for label in pool {
                    if rng.gen_bool(0.5) && !picked.contains(&label) {
                        picked.push(label);
                    }
                }
                if picked.is_empty() {
                    picked.push("car");
                }
                per_frame(&picked)
            })
            .collect();

        // Brute-force ordered union.
        let mut expected: Vec<String> = Vec::new();
        for f in &frames {
            for l in f.labels() {
                if !expected.contains(l) {
                    expected.push(l.clone());
                }
            }
        }

        let merged = merge_sequence_vocab(&frames).unwrap();
        assert_eq!(merged.labels(), expected.as_slice());

        // Idempotence: merging the merged set with itself changes nothing.
        let twice = merge_sequence_vocab(&[merged.clone(), merged.clone()]).unwrap();
        assert_eq!(twice.labels(), merged.labels());

        // |merged| <= sum of frame sizes.
        let total: usize = frames.iter().map(VocabularySet::len).sum();
        assert!(merged.len() <= total);
    }

    #[test]
    fn classify_identical_vector() {
        let emb = EmbeddingMatrix::new(2, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let (id, score) = classify(&[1.0, 0.0], &emb).unwrap();
        assert_eq!(id, LabelId(0));
        assert!((score - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classify_tie_breaks_to_smallest_id() {
        let emb = EmbeddingMatrix::new(2, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let (id, score) = classify(&[1.0, 1.0], &emb).unwrap();
        assert_eq!(id, LabelId(0));
        assert!((score - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
    }

    #[test]
    fn classify_rejects_zero_feature() {
        let emb = EmbeddingMatrix::new(1, 2, vec![1.0, 0.0]).unwrap();
        assert!(matches!(classify(&[0.0, 0.0], &emb), Err(Error::ZeroNorm(_))));
    }

    #[test]
    fn classify_matches_exhaustive_scan_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let emb = random_unit_rows(&mut rng, 64, 16);
        for _ in 0..100 {
            let query: Vec<f64> = (0..16).map(|_| rng.gen_range(-1.0..1.0)).collect();
            if norm(&query) == 0.0 {
                continue;
            }
            let (id, score) = classify(&query, &emb).unwrap();

            let mut best_id = 0usize;
            let mut best_score = f64::NEG_INFINITY;
            for i in 0..emb.len() {
                let c = cosine(&query, emb.row(i)).unwrap();
                if c > best_score {
                    best_score = c;
                    best_id = i;
                }
            }
            assert_eq!(id, LabelId(best_id as u16));
            assert_eq!(score, best_score);
        }
    }

    #[test]
    fn normalize_three_four_five() {
        let emb = EmbeddingMatrix::new(1, 2, vec![3.0, 4.0]).unwrap();
        let n = normalize_rows(&emb).unwrap();
        assert!((n.row(0)[0] - 0.6).abs() < 1e-12);
        assert!((n.row(0)[1] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn normalize_is_idempotent_within_tolerance() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let emb = random_unit_rows(&mut rng, 8, 4);
        let n = normalize_rows(&emb).unwrap();
        for (a, b) in emb.data().iter().zip(n.data()) {
            assert!((a - b).abs() < 1e-7);
        }
    }

    #[test]
    fn classify_invariant_under_normalization_and_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut data = Vec::new();
        for _ in 0..12 {
            for _ in 0..6 {
                data.push(rng.gen_range(-4.0..4.0));
            }
        }
        let emb = EmbeddingMatrix::new(12, 6, data).unwrap();
        let normalized = normalize_rows(&emb).unwrap();
        for _ in 0..1000 {
            let query: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
            if norm(&query) < 1e-9 {
                continue;
            }
            let (a, _) = classify(&query, &emb).unwrap();
            let (b, _) = classify(&query, &normalized).unwrap();
            assert_eq!(a, b);

            let scale = rng.gen_range(0.1..10.0);
            let scaled: Vec<f64> = query.iter().map(|x| x * scale).collect();
            let (c, _) = classify(&scaled, &emb).unwrap();
            assert_eq!(a, c);
        }
    }

    #[test]
    fn vocab_rejects_duplicates_and_empty() {
        assert!(VocabularySet::new(["car", "CAR"], VocabScope::PerFrame).is_err());
        assert!(VocabularySet::new(["", "car"], VocabScope::PerFrame).is_err());
    }

    #[test]
    fn mapping_to_translates_by_string() {
        let a = per_frame(&["car", "road", "tree"]);
        let b = per_frame(&["road", "car"]);
        let map = a.mapping_to(&b);
        assert_eq!(map, vec![LabelId(1), LabelId(0), LabelId::UNLABELED]);
    }
}
