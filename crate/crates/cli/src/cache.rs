//! The `fopt_cache.tsv` table of Z-channel codes with many free points.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use fbcode_core::bounds::{max_feasible_cardinality, WeightDistribution};
use fbcode_core::search::{nested_from, search_f_optimal_in, FOptimalEntry, SearchError, SearchLimit, ZSpace};
use fbcode_core::{ErrorGraph, NonadaptiveCode, Word};

use crate::formats::{read_text, write_text, FormatError};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "FBCODE_CACHE_DIR";
pub const CACHE_FILE: &str = "fopt_cache.tsv";
const HEADER: &str = "n\tM\tt\tF\tweight_distribution\tcenters";

/// Lengths searched exhaustively for every cardinality.
pub const EXHAUSTIVE_LENGTHS: std::ops::RangeInclusive<usize> = 1..=8;
/// Length searched for its largest code only, smaller codes by nested deletion.
pub const NESTED_LENGTH: usize = 9;

pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("cache"))
}

pub fn cache_path(dir: &Path) -> PathBuf {
    dir.join(CACHE_FILE)
}

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache file {0} not found; run `fbcode search --all --write-cache` first")]
    Missing(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("line {line}: {why}")]
    Parse { line: usize, why: String },
    #[error(transparent)]
    Search(#[from] SearchError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheEntry {
    pub n: usize,
    pub m: u64,
    pub t: usize,
    pub free_points: i64,
    pub distribution: WeightDistribution,
    pub centers: Vec<Word>,
}

impl CacheEntry {
    pub fn code(&self) -> NonadaptiveCode {
        NonadaptiveCode::new(self.n, self.t, ErrorGraph::z_channel(), self.centers.clone()).expect("checked on insert")
    }
}

impl From<&FOptimalEntry> for CacheEntry {
    fn from(e: &FOptimalEntry) -> Self {
        CacheEntry {
            n: e.n,
            m: e.m,
            t: e.t,
            free_points: e.free_points,
            distribution: e.distribution.clone(),
            centers: e.centers.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FoptCache {
    entries: BTreeMap<(usize, u64, usize), CacheEntry>,
}

impl FoptCache {
    pub fn new() -> Self {
        FoptCache::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, n: usize, m: u64) -> Option<&CacheEntry> {
        self.entries.get(&(n, m, 1))
    }

    pub fn entries(&self) -> impl Iterator<Item = &CacheEntry> {
        self.entries.values()
    }

    /// Entries of one length, increasing `M`.
    pub fn length(&self, n: usize) -> Vec<&CacheEntry> {
        self.entries.values().filter(|e| e.n == n && e.t == 1).collect()
    }

    /// Inserts after recomputing the free points and weight distribution
    /// from the centers.
    pub fn insert(&mut self, e: CacheEntry) -> Result<(), String> {
        let code = NonadaptiveCode::new(e.n, e.t, ErrorGraph::z_channel(), e.centers.clone()).map_err(|x| x.to_string())?;
        let report = code.validate();
        if !report.passed() {
            return Err(format!("clouds overlap in ({}, {})", e.n, e.m));
        }
        let free = report.free_points as i64;
        if free != e.free_points || code.len() as u64 != e.m {
            return Err(format!("({}, {}): stored F {} but centers give {free}", e.n, e.m, e.free_points));
        }
        if WeightDistribution::of_words(e.n, e.centers.iter().map(Word::value)) != e.distribution {
            return Err(format!("({}, {}): weight distribution does not match the centers", e.n, e.m));
        }
        self.entries.insert((e.n, e.m, e.t), e);
        Ok(())
    }

    /// `(M, F)` pairs of one length, including the empty code.
    pub fn f_table(&self, n: usize) -> Vec<(u64, i64)> {
        let mut out = vec![(0, 1i64 << n)];
        out.extend(self.length(n).iter().map(|e| (e.m, e.free_points)));
        out
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from(HEADER);
        out.push('\n');
        for e in self.entries.values() {
            let centers: Vec<String> = e.centers.iter().map(Word::to_string).collect();
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                e.n,
                e.m,
                e.t,
                e.free_points,
                e.distribution,
                centers.join(";")
            );
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self, CacheError> {
        let mut cache = FoptCache::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if i == 0 && line == HEADER || line.trim().is_empty() {
                continue;
            }
            let err = |why: String| CacheError::Parse { line: line_no, why };
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 6 {
                return Err(err(format!("expected 6 columns, found {}", cols.len())));
            }
            let num = |s: &str| s.parse::<i64>().map_err(|e| err(format!("{s}: {e}")));
            let n = num(cols[0])? as usize;
            let distribution: WeightDistribution = cols[4].parse().map_err(|_| err(format!("bad distribution {}", cols[4])))?;
            let centers = cols[5]
                .split(';')
                .filter(|s| !s.is_empty())
                .map(|s| Word::parse(s, 2))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| err(e.to_string()))?;
            let entry = CacheEntry {
                n,
                m: num(cols[1])? as u64,
                t: num(cols[2])? as usize,
                free_points: num(cols[3])?,
                distribution,
                centers,
            };
            cache.insert(entry).map_err(err)?;
        }
        Ok(cache)
    }

    pub fn load(dir: &Path) -> Result<Self, CacheError> {
        let path = cache_path(dir);
        if !path.exists() {
            return Err(CacheError::Missing(path.display().to_string()));
        }
        FoptCache::from_tsv(&read_text(&path)?)
    }

    pub fn save(&self, dir: &Path) -> Result<PathBuf, CacheError> {
        std::fs::create_dir_all(dir).map_err(|source| FormatError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        let path = cache_path(dir);
        write_text(&path, &self.to_tsv())?;
        Ok(path)
    }

    pub fn merge(&mut self, other: FoptCache) {
        self.entries.extend(other.entries);
    }
}

/// Every cardinality of one length, searched independently.
pub fn search_length(n: usize, limit: SearchLimit) -> Result<Vec<FOptimalEntry>, CacheError> {
    if n == 1 {
        // only the word 0 fits; its cloud is itself
        let centers = vec![Word::binary(0, 1)];
        return Ok(vec![FOptimalEntry {
            n: 1,
            m: 1,
            t: 1,
            free_points: 1,
            distribution: WeightDistribution::new(vec![1, 0]),
            centers,
            optimal_flag: true,
            proven: true,
            bound: 1,
        }]);
    }
    let space = ZSpace::new(n)?;
    let top = max_feasible_cardinality(n, 1).map_err(SearchError::from)?;
    let mut out = Vec::new();
    for m in 1..=top {
        match search_f_optimal_in(&space, m, 1, limit) {
            Ok(e) => out.push(e),
            Err(SearchError::Infeasible { .. }) => break,
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

/// Nested family below the largest code the search realises.
pub fn search_nested(n: usize, limit: SearchLimit) -> Result<Vec<FOptimalEntry>, CacheError> {
    let space = ZSpace::new(n)?;
    let mut m = max_feasible_cardinality(n, 1).map_err(SearchError::from)?;
    loop {
        match search_f_optimal_in(&space, m, 1, limit) {
            Ok(top) => return Ok(nested_from(&space, &top).map_err(SearchError::from)?),
            Err(SearchError::Infeasible { .. }) if m > 1 => m -= 1,
            Err(e) => return Err(e.into()),
        }
    }
}

/// The standard cache: every cardinality for lengths 1 to 8, the nested
/// family at length 9.
pub fn build_standard_cache(limit: SearchLimit) -> Result<FoptCache, CacheError> {
    let mut cache = FoptCache::new();
    let mut add = |entries: Vec<FOptimalEntry>| -> Result<(), CacheError> {
        for e in &entries {
            cache.insert(e.into()).map_err(|why| CacheError::Parse { line: 0, why })?;
        }
        Ok(())
    };
    for n in EXHAUSTIVE_LENGTHS {
        add(search_length(n, limit)?)?;
    }
    add(search_nested(NESTED_LENGTH, limit)?)?;
    Ok(cache)
}

/// Loads the cache, building and saving it first when the file is missing.
pub fn load_or_build(dir: &Path) -> Result<FoptCache, CacheError> {
    match FoptCache::load(dir) {
        Err(CacheError::Missing(_)) => {
            let cache = build_standard_cache(SearchLimit::default())?;
            cache.save(dir)?;
            Ok(cache)
        }
        other => other,
    }
}
