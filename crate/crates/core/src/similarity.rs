//! Pairwise item distances.
//!
//! Three raw measures are computed for every unordered pair `i < j`:
//!
//! * crew: `ln(1 + |S_i ∩ S_j|)` over shared staff and cast,
//! * score: chi-squared distance between normalized vote histograms,
//! * topic: `|G_i ∩ G_j|` over shared genres and themes.
//!
//! Each measure is min-max normalized over all pairs. Crew and topic grow with
//! similarity, so they are inverted (`1 - x`) to point the same way as the
//! score distance. The fused distance is the Euclidean norm of the three
//! aligned components and lies in `[0, √3]`.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::dataset::Catalog;
use crate::error::{Error, Result};

/// Vote counts normalized to a probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreHistogram {
    probs: Vec<f64>,
}

impl ScoreHistogram {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Normalizes vote counts; `owner` names the record in the error.
pub fn score_histogram(votes: &[u64], owner: &str) -> Result<ScoreHistogram> {
    let total: u64 = votes.iter().sum();
    if total == 0 {
        return Err(Error::EmptyHistogram(owner.to_owned()));
    }
    let total = total as f64;
    Ok(ScoreHistogram {
        probs: votes.iter().map(|&c| c as f64 / total).collect(),
    })
}

pub fn crew_similarity<S: AsRef<str>>(a: &[S], b: &[S]) -> f64 {
    let shared = a
        .iter()
        .filter(|x| b.iter().any(|y| y.as_ref() == x.as_ref()))
        .count();
    crew_from_count(shared)
}

#[inline]
fn crew_from_count(shared: usize) -> f64 {
    (1.0 + shared as f64).ln()
}

/// Chi-squared distance, summed in ascending category order. Categories empty
/// in both histograms contribute nothing.
pub fn score_similarity(x: &ScoreHistogram, y: &ScoreHistogram) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(chi_squared(&x.probs, &y.probs))
}

#[inline]
fn chi_squared(x: &[f64], y: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        let s = a + b;
        if s > 0.0 {
            let d = a - b;
            sum += d * d / s;
        }
    }
    sum
}

pub fn topic_similarity<S: AsRef<str>>(a: &[S], b: &[S]) -> u32 {
    a.iter()
        .filter(|x| b.iter().any(|y| y.as_ref() == x.as_ref()))
        .count() as u32
}

/// Raw measures of one unordered pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawPair {
    pub i: u32,
    pub j: u32,
    pub crew: f64,
    pub score: f64,
    pub topic: u32,
}

/// Observed range of one measure over all pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureRange {
    pub min: f64,
    pub max: f64,
}

impl MeasureRange {
    const EMPTY: MeasureRange = MeasureRange {
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
    };

    fn include(&mut self, value: f64) {
        self.min = self.min.min(value);
        self.max = self.max.max(value);
    }

    fn merge(self, other: MeasureRange) -> MeasureRange {
        MeasureRange {
            min: self.min.min(other.min),
            max: self.max.max(other.max),
        }
    }

    pub fn normalize(&self, value: f64) -> f64 {
        normalize(value, self.min, self.max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationStats {
    pub crew: MeasureRange,
    pub score: MeasureRange,
    pub topic: MeasureRange,
}

impl NormalizationStats {
    fn empty() -> Self {
        NormalizationStats {
            crew: MeasureRange::EMPTY,
            score: MeasureRange::EMPTY,
            topic: MeasureRange::EMPTY,
        }
    }

    fn include(&mut self, pair: &RawPair) {
        self.crew.include(pair.crew);
        self.score.include(pair.score);
        self.topic.include(pair.topic as f64);
    }

    fn merge(self, other: Self) -> Self {
        NormalizationStats {
            crew: self.crew.merge(other.crew),
            score: self.score.merge(other.score),
            topic: self.topic.merge(other.topic),
        }
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = &'a RawPair>) -> Self {
        let mut stats = Self::empty();
        for p in pairs {
            stats.include(p);
        }
        stats
    }
}

/// Min-max scaling; a degenerate range maps everything to 0.
pub fn normalize(value: f64, min: f64, max: f64) -> f64 {
    if max > min {
        (value - min) / (max - min)
    } else {
        0.0
    }
}

/// Aligned components and their Euclidean norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fused {
    pub crew: f64,
    pub score: f64,
    pub topic: f64,
    pub delta: f64,
}

/// Inverts the normalized crew and topic similarities and fuses all three.
pub fn fuse(crew_norm: f64, score_norm: f64, topic_norm: f64) -> Fused {
    let crew = 1.0 - crew_norm;
    let topic = 1.0 - topic_norm;
    let score = score_norm;
    Fused {
        crew,
        score,
        topic,
        delta: (crew * crew + score * score + topic * topic).sqrt(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityVector {
    pub i: u32,
    pub j: u32,
    pub crew_raw: f64,
    pub score_raw: f64,
    pub topic_raw: u32,
    /// Inverted normalized crew similarity.
    pub crew_norm: f64,
    pub score_norm: f64,
    /// Inverted normalized topic similarity.
    pub topic_norm: f64,
    pub delta: f64,
}

impl SimilarityVector {
    pub fn from_raw(raw: &RawPair, stats: &NormalizationStats) -> Self {
        let fused = fuse(
            stats.crew.normalize(raw.crew),
            stats.score.normalize(raw.score),
            stats.topic.normalize(raw.topic as f64),
        );
        SimilarityVector {
            i: raw.i,
            j: raw.j,
            crew_raw: raw.crew,
            score_raw: raw.score,
            topic_raw: raw.topic,
            crew_norm: fused.crew,
            score_norm: fused.score,
            topic_norm: fused.topic,
            delta: fused.delta,
        }
    }
}

/// Per-record features with crew and topic strings interned to sorted ids.
pub struct PairFeatures {
    crew: Vec<Vec<u32>>,
    topics: Vec<Vec<u32>>,
    histograms: Vec<Vec<f64>>,
    crew_log: Vec<f64>,
}

impl PairFeatures {
    pub fn new(catalog: &Catalog) -> Result<Self> {
        let mut crew_ids = Interner::default();
        let mut topic_ids = Interner::default();
        let mut crew = Vec::with_capacity(catalog.size());
        let mut topics = Vec::with_capacity(catalog.size());
        let mut histograms = Vec::with_capacity(catalog.size());
        let mut largest = 0;
        for record in catalog.records() {
            crew.push(crew_ids.sorted(&record.crew));
            topics.push(topic_ids.sorted(&record.topics));
            histograms.push(score_histogram(&record.votes, &record.id)?.probs);
            largest = largest.max(record.crew.len());
        }
        Ok(PairFeatures {
            crew,
            topics,
            histograms,
            crew_log: (0..=largest).map(crew_from_count).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.crew.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crew.is_empty()
    }

    pub fn raw_pair(&self, i: usize, j: usize) -> RawPair {
        RawPair {
            i: i as u32,
            j: j as u32,
            crew: self.crew_log[sorted_intersection(&self.crew[i], &self.crew[j])],
            score: chi_squared(&self.histograms[i], &self.histograms[j]),
            topic: sorted_intersection(&self.topics[i], &self.topics[j]) as u32,
        }
    }
}

#[derive(Default)]
struct Interner {
    ids: HashMap<String, u32>,
}

impl Interner {
    fn sorted(&mut self, items: &[String]) -> Vec<u32> {
        let mut out: Vec<u32> = items
            .iter()
            .map(|s| {
                let next = self.ids.len() as u32;
                *self.ids.entry(s.clone()).or_insert(next)
            })
            .collect();
        out.sort_unstable();
        out
    }
}

fn sorted_intersection(a: &[u32], b: &[u32]) -> usize {
    let (mut x, mut y, mut n) = (0, 0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                x += 1;
                y += 1;
            }
        }
    }
    n
}

/// Number of unordered pairs among `k` items.
pub fn pair_count(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// All raw pairs in `(i, j)` lexicographic order.
#[derive(Debug, Clone)]
pub struct RawPairs {
    pub k: usize,
    pub pairs: Vec<RawPair>,
    pub stats: NormalizationStats,
}

/// Raw measures for all `k(k-1)/2` pairs with their global ranges.
///
/// Rows are computed in parallel; output order and statistics do not depend
/// on scheduling.
pub fn compute_raw_pairs(catalog: &Catalog) -> Result<RawPairs> {
    let k = catalog.size();
    if k < 2 {
        return Err(Error::CatalogTooSmall(k));
    }
    let features = PairFeatures::new(catalog)?;
    let mut pairs = Vec::with_capacity(pair_count(k));
    pairs.par_extend(
        (0..k - 1)
            .into_par_iter()
            .flat_map_iter(|i| (i + 1..k).map(move |j| (i, j)))
            .map(|(i, j)| features.raw_pair(i, j)),
    );
    let stats = pairs
        .par_chunks(1 << 16)
        .map(NormalizationStats::from_pairs)
        .reduce(NormalizationStats::empty, NormalizationStats::merge);
    Ok(RawPairs { k, pairs, stats })
}

/// Normalized and fused vectors for every pair, in input order.
pub fn fuse_pairs(raw: &RawPairs) -> Vec<SimilarityVector> {
    raw.pairs
        .par_iter()
        .map(|p| SimilarityVector::from_raw(p, &raw.stats))
        .collect()
}

/// Convenience for small catalogs: the full normalized pair table.
pub fn similarity_table(catalog: &Catalog) -> Result<(Vec<SimilarityVector>, NormalizationStats)> {
    let raw = compute_raw_pairs(catalog)?;
    Ok((fuse_pairs(&raw), raw.stats))
}
