//! Item catalogs: line-delimited JSON ingestion, validation and a seeded
//! synthetic generator.
//!
//! Every line of a catalog file is one JSON object:
//!
//! ```text
//! {"id":"3907","title":"...","crew":["..."],"votes":[3,10,0,...],"topics":["action","ninja"]}
//! ```
//!
//! Records are addressed by their dense position `0..k` in file order. Blank
//! lines are ignored.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of score categories used when none is configured.
pub const DEFAULT_CATEGORIES: usize = 11;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnimeRecord {
    pub id: String,
    pub title: String,
    pub crew: Vec<String>,
    pub votes: Vec<u64>,
    pub topics: Vec<String>,
}

impl AnimeRecord {
    fn check(&self, n_categories: usize) -> std::result::Result<(), RecordProblem> {
        if self.id.is_empty() {
            return Err(RecordProblem::Invalid("empty id".into()));
        }
        if self.id.chars().any(char::is_control) {
            return Err(RecordProblem::Invalid(
                "id contains control characters".into(),
            ));
        }
        if let Some(dup) = first_duplicate(&self.crew) {
            return Err(RecordProblem::Invalid(format!(
                "duplicate crew member {dup:?}"
            )));
        }
        if let Some(dup) = first_duplicate(&self.topics) {
            return Err(RecordProblem::Invalid(format!("duplicate topic {dup:?}")));
        }
        if self.votes.len() != n_categories {
            return Err(RecordProblem::VotesLength(self.votes.len()));
        }
        Ok(())
    }
}

enum RecordProblem {
    Invalid(String),
    VotesLength(usize),
}

fn first_duplicate(items: &[String]) -> Option<&str> {
    let mut seen = HashSet::with_capacity(items.len());
    items
        .iter()
        .find(|item| !seen.insert(item.as_str()))
        .map(String::as_str)
}

/// An immutable, validated collection of records sharing one category count.
#[derive(Debug, Clone)]
pub struct Catalog {
    records: Vec<AnimeRecord>,
    n_categories: usize,
    positions: HashMap<String, usize>,
}

impl PartialEq for Catalog {
    fn eq(&self, other: &Self) -> bool {
        self.n_categories == other.n_categories && self.records == other.records
    }
}

impl Catalog {
    pub fn new(records: Vec<AnimeRecord>, n_categories: usize) -> Result<Self> {
        Self::build(
            records.into_iter().enumerate().map(|(i, r)| (i + 1, r)),
            n_categories,
        )
    }

    fn build(
        numbered: impl IntoIterator<Item = (usize, AnimeRecord)>,
        n_categories: usize,
    ) -> Result<Self> {
        let mut records = Vec::new();
        let mut positions = HashMap::new();
        for (line, record) in numbered {
            match record.check(n_categories) {
                Ok(()) => {}
                Err(RecordProblem::Invalid(message)) => {
                    return Err(Error::InvalidRecord {
                        line,
                        id: record.id,
                        message,
                    })
                }
                Err(RecordProblem::VotesLength(found)) => {
                    return Err(Error::VotesLength {
                        id: record.id,
                        expected: n_categories,
                        found,
                    })
                }
            }
            if positions.insert(record.id.clone(), records.len()).is_some() {
                return Err(Error::DuplicateId(record.id));
            }
            records.push(record);
        }
        if records.len() < 2 {
            return Err(Error::CatalogTooSmall(records.len()));
        }
        Ok(Catalog {
            records,
            n_categories,
            positions,
        })
    }

    /// Parses line-delimited records. Line numbers in errors are 1-based.
    pub fn from_reader(reader: impl BufRead, n_categories: usize) -> Result<Self> {
        let mut parsed = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let record: AnimeRecord =
                serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
                    line: line_no,
                    message: e.to_string(),
                })?;
            parsed.push((line_no, record));
        }
        Self::build(parsed, n_categories)
    }

    pub fn write_to(&self, mut out: impl Write) -> Result<()> {
        for record in &self.records {
            serde_json::to_writer(&mut out, record).map_err(std::io::Error::from)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = std::io::BufWriter::new(file);
        self.write_to(&mut out)?;
        out.flush().map_err(|e| Error::io(path, e))
    }

    pub fn records(&self) -> &[AnimeRecord] {
        &self.records
    }

    pub fn record(&self, index: usize) -> &AnimeRecord {
        &self.records[index]
    }

    /// Number of records, `k`.
    pub fn size(&self) -> usize {
        self.records.len()
    }

    pub fn n_categories(&self) -> usize {
        self.n_categories
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.positions.get(id).copied()
    }

    pub fn ids(&self) -> Vec<String> {
        self.records.iter().map(|r| r.id.clone()).collect()
    }
}

pub fn load_catalog(path: &Path, n_categories: usize) -> Result<Catalog> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Catalog::from_reader(BufReader::new(file), n_categories)
}

const GENRES: [&str; 12] = [
    "action",
    "adventure",
    "comedy",
    "drama",
    "fantasy",
    "horror",
    "mystery",
    "psychological",
    "romance",
    "science fiction",
    "slice of life",
    "supernatural",
];

const THEMES: [&str; 16] = [
    "ninja",
    "pirates",
    "mecha",
    "school",
    "sports",
    "music",
    "military",
    "space",
    "magic",
    "martial arts",
    "detective",
    "samurai",
    "idols",
    "cooking",
    "time travel",
    "shinigami",
];

const STUDIO_POOL: usize = 60;
const FAVORITE_TOPICS: usize = 3;

/// Deterministic synthetic catalog of `k` records.
///
/// Records belong to studios with private staff pools and also draw from a
/// shared freelance pool. Records 0 and 1 share a studio (and hence its lead),
/// while record 2 uses only its own studio's staff, so both shared and
/// disjoint crews are present whenever `k >= 3`.
pub fn generate_synthetic(k: usize, seed: u64, n_categories: usize) -> Result<Catalog> {
    if k < 2 {
        return Err(Error::CatalogTooSmall(k));
    }
    if n_categories == 0 {
        return Err(Error::format("category count", "must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocabulary: Vec<&str> = GENRES.iter().chain(THEMES.iter()).copied().collect();
    let n_studios = (k / 12).max(2);
    let freelance_pool = (k / 2).max(200);

    let favorites: Vec<Vec<usize>> = (0..n_studios)
        .map(|_| rand::seq::index::sample(&mut rng, vocabulary.len(), FAVORITE_TOPICS).into_vec())
        .collect();

    let mut records = Vec::with_capacity(k);
    for idx in 0..k {
        let studio = match idx {
            0 | 1 => 0,
            2 => 1,
            _ => rng.gen_range(0..n_studios),
        };
        let crew_size = rng.gen_range(5..=40usize);
        let freelancers = if idx == 2 {
            0
        } else {
            rng.gen_range(0..=crew_size * 3 / 10)
        };
        let in_house = (crew_size - freelancers).min(STUDIO_POOL);

        let mut crew = vec![format!("s{studio}-0")];
        crew.extend(
            rand::seq::index::sample(&mut rng, STUDIO_POOL - 1, in_house - 1)
                .into_iter()
                .map(|m| format!("s{studio}-{}", m + 1)),
        );
        crew.extend(
            rand::seq::index::sample(&mut rng, freelance_pool, freelancers)
                .into_iter()
                .map(|m| format!("f{m}")),
        );

        let votes = synthetic_votes(&mut rng, n_categories);

        let topic_count = rng.gen_range(1..=8usize);
        let mut topics: Vec<&str> = Vec::with_capacity(topic_count);
        for &fav in &favorites[studio] {
            if topics.len() < topic_count && rng.gen_bool(0.6) {
                topics.push(vocabulary[fav]);
            }
        }
        while topics.len() < topic_count {
            let t = vocabulary[rng.gen_range(0..vocabulary.len())];
            if !topics.contains(&t) {
                topics.push(t);
            }
        }

        records.push(AnimeRecord {
            id: (idx + 1).to_string(),
            title: format!("Studio {studio} Production {}", idx + 1),
            crew,
            votes,
            topics: topics.into_iter().map(str::to_owned).collect(),
        });
    }
    Catalog::new(records, n_categories)
}

/// Votes peaked around a random category, at least one vote in total.
fn synthetic_votes(rng: &mut ChaCha8Rng, n_categories: usize) -> Vec<u64> {
    let peak = rng.gen_range(0..n_categories) as f64;
    let spread: f64 = rng.gen_range(0.6..3.0);
    let weights: Vec<f64> = (0..n_categories)
        .map(|c| {
            let z = (c as f64 - peak) / spread;
            (-0.5 * z * z).exp() + 1e-3
        })
        .collect();
    let sampler = WeightedIndex::new(&weights).expect("weights are positive");
    let total = rng.gen_range(1..=400u32);
    let mut votes = vec![0u64; n_categories];
    for _ in 0..total {
        votes[sampler.sample(rng)] += 1;
    }
    votes
}
