//! Upper bounds on the free points of asymmetric-error-correcting codes.
//!
//! A code of length `n` correcting `t` asymmetric (1 -> 0) errors is
//! summarised by its weight distribution `z_0..z_n`. The distribution obeys
//! a family of linear inequalities built from binomial coefficients and
//! constant-weight code sizes; maximising the free-point count over all
//! integer distributions satisfying them bounds every real code.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::constant_weight::CwTable;
use crate::math::binomial;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightDistribution {
    z: Vec<u64>,
}

impl WeightDistribution {
    pub fn new(z: Vec<u64>) -> Self {
        WeightDistribution { z }
    }

    /// Distribution of binary codewords given as packed values of length `n`.
    pub fn of_words(n: usize, words: impl IntoIterator<Item = u64>) -> Self {
        let mut z = vec![0; n + 1];
        for w in words {
            z[w.count_ones() as usize] += 1;
        }
        WeightDistribution { z }
    }

    /// Code length `n` (the vector has `n + 1` entries).
    pub fn n(&self) -> usize {
        self.z.len() - 1
    }

    pub fn counts(&self) -> &[u64] {
        &self.z
    }

    pub fn get(&self, w: usize) -> u64 {
        self.z.get(w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.z.iter().sum()
    }

    /// `2^n - Σ z_i · |ball of radius t around a weight-i word|`.
    pub fn free_points(&self, t: usize) -> i64 {
        let n = self.n();
        (1i64 << n) - self.z.iter().enumerate().map(|(i, &c)| c as i64 * ball_size(i, t) as i64).sum::<i64>()
    }
}

impl fmt::Display for WeightDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.z.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for WeightDistribution {
    type Err = core::num::ParseIntError;

    /// Parses `1+0+3+4+3+0+1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split('+')
            .map(|p| p.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map(WeightDistribution::new)
    }
}

/// Number of words a weight-`i` word can turn into with at most `t` 1 -> 0 errors.
pub fn ball_size(i: usize, t: usize) -> u64 {
    (0..=t).map(|j| binomial(i as u64, j as u64)).sum()
}

/// Which index ranges the refined layer inequalities (the ones carrying an
/// extra floor-expression term) are applied over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RefinedRange {
    /// Upward form for `1 <= s <= t`, downward form for `0 <= s <= t - 1`.
    #[default]
    Sound,
    /// Both forms for every `0 <= s <= t`. This rejects real codes (for
    /// example every optimal code of length 6) and is only a diagnostic.
    Literal,
    /// Refined inequalities omitted.
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RefinedForm {
    Upward,
    Downward,
}

/// Identifies one inequality of the system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constraint {
    /// `z_0 = 1` and `z_1 = .. = z_t = 0`.
    Base { index: usize },
    /// Layer packing around weight `w`.
    Layer { w: usize, s: usize },
    /// Constant-weight packing of light words, `0 <= s <= r`.
    Light { r: usize, s: usize },
    /// Constant-weight packing of heavy words.
    Heavy { r: usize, s: usize },
    /// Layer packing with the extra floor term.
    Refined { w: usize, s: usize, form: RefinedForm },
    /// `Σ z_i = M`.
    Cardinality,
}

impl Constraint {
    /// Short numeric tag: 2 for base, 3 layer, 4 light, 5 heavy, 6 refined, 7 cardinality.
    pub fn tag(&self) -> u8 {
        match self {
            Constraint::Base { .. } => 2,
            Constraint::Layer { .. } => 3,
            Constraint::Light { .. } => 4,
            Constraint::Heavy { .. } => 5,
            Constraint::Refined { .. } => 6,
            Constraint::Cardinality => 7,
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Base { index } => write!(f, "base(z{index})"),
            Constraint::Layer { w, s } => write!(f, "layer(w={w},s={s})"),
            Constraint::Light { r, s } => write!(f, "light(r={r},s={s})"),
            Constraint::Heavy { r, s } => write!(f, "heavy(r={r},s={s})"),
            Constraint::Refined { w, s, form } => {
                let d = if *form == RefinedForm::Upward { "up" } else { "down" };
                write!(f, "refined-{d}(w={w},s={s})")
            }
            Constraint::Cardinality => f.write_str("cardinality"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundError {
    /// Requires `n >= 2t >= 2` and `M >= 1`.
    InvalidParameters { n: usize, m: u64, t: usize },
    LengthMismatch { expected: usize, found: usize },
    /// No distribution satisfies the system, so no such code exists.
    Infeasible { n: usize, m: u64, t: usize },
}

impl fmt::Display for BoundError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundError::InvalidParameters { n, m, t } => {
                write!(f, "invalid parameters n={n}, M={m}, t={t} (need n >= 2t >= 2, M >= 1)")
            }
            BoundError::LengthMismatch { expected, found } => {
                write!(f, "weight distribution has {found} entries, expected {expected}")
            }
            BoundError::Infeasible { n, m, t } => {
                write!(f, "no weight distribution is feasible for n={n}, M={m}, t={t}")
            }
        }
    }
}

impl core::error::Error for BoundError {}

#[derive(Clone, Debug)]
struct Linear {
    id: Constraint,
    terms: Vec<(usize, i64)>,
    rhs: i64,
}

/// Parameters of one bound computation.
#[derive(Clone, Debug)]
pub struct BoundProblem {
    n: usize,
    m: u64,
    t: usize,
    cw: Arc<CwTable>,
    refined: RefinedRange,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    /// Violated inequalities, in generation order.
    pub violations: Vec<Constraint>,
    /// Inequalities not evaluated because a constant-weight value was missing.
    pub skipped: Vec<Constraint>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<Constraint> {
        self.violations.first().copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundResult {
    pub free_points: i64,
    /// A maximising distribution (the lexicographically smallest reading
    /// from the heaviest weight down among ties).
    pub distribution: WeightDistribution,
    /// Dropping the refined inequalities would raise the bound.
    pub refined_binding: bool,
}

impl BoundProblem {
    /// Problem with the standard constant-weight table (exact to length 9).
    pub fn new(n: usize, m: u64, t: usize) -> Result<Self, BoundError> {
        let cw = Arc::new(CwTable::standard(2 * t + 2, 2 * n));
        BoundProblem::with_table(n, m, t, cw)
    }

    pub fn with_table(n: usize, m: u64, t: usize, cw: Arc<CwTable>) -> Result<Self, BoundError> {
        if t == 0 || n < 2 * t || m == 0 {
            return Err(BoundError::InvalidParameters { n, m, t });
        }
        Ok(BoundProblem {
            n,
            m,
            t,
            cw,
            refined: RefinedRange::Sound,
        })
    }

    /// Same length, error budget and table with another cardinality.
    pub fn with_cardinality(&self, m: u64) -> Result<Self, BoundError> {
        BoundProblem::with_table(self.n, m, self.t, self.cw.clone()).map(|p| p.with_refined(self.refined))
    }

    pub fn with_refined(mut self, refined: RefinedRange) -> Self {
        self.refined = refined;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn table(&self) -> &Arc<CwTable> {
        &self.cw
    }

    pub fn refined(&self) -> RefinedRange {
        self.refined
    }

    fn layer_terms(&self, w: usize, s: usize) -> Vec<(usize, i64)> {
        let (n, t) = (self.n, self.t);
        let mut terms = Vec::new();
        for i in 1..=s {
            terms.push((w - i, binomial((n - w + i) as u64, i as u64) as i64));
        }
        for j in 0..=t - s {
            terms.push((w + j, binomial((w + j) as u64, j as u64) as i64));
        }
        terms
    }

    /// Inequalities other than base and cardinality, plus the ones skipped
    /// for lack of table data.
    fn system(&self) -> (Vec<Linear>, Vec<Constraint>) {
        let (n, t) = (self.n, self.t);
        let cn = |w: usize| binomial(n as u64, w as u64) as i64;
        let mut out = Vec::new();
        let mut skipped = Vec::new();

        for w in t + 1..n.saturating_sub(t) {
            for s in 0..=t {
                out.push(Linear {
                    id: Constraint::Layer { w, s },
                    terms: self.layer_terms(w, s),
                    rhs: cn(w),
                });
            }
        }

        for r in 0..=n {
            for s in 0..=r {
                let id_light = Constraint::Light { r, s };
                let id_heavy = Constraint::Heavy { r, s };
                let rhs = match self.cw.try_get(n + r - s, r) {
                    Some(v) => v.upper as i64,
                    None => {
                        skipped.push(id_light);
                        skipped.push(id_heavy);
                        continue;
                    }
                };
                let mut light = Vec::new();
                let mut heavy = Vec::new();
                for j in s..=r {
                    let l = match self.cw.try_get(r - s, r - j) {
                        Some(v) => v.lower as i64,
                        None => 0,
                    };
                    if l != 0 {
                        light.push((j, l));
                        heavy.push((n - j, l));
                    }
                }
                out.push(Linear {
                    id: id_light,
                    terms: light,
                    rhs,
                });
                out.push(Linear {
                    id: id_heavy,
                    terms: heavy,
                    rhs,
                });
            }
        }

        if self.refined != RefinedRange::Off {
            let literal = self.refined == RefinedRange::Literal;
            for w in t + 1..n.saturating_sub(t) {
                for s in 0..=t {
                    if s >= 1 || literal {
                        let k = w + t - s + 1;
                        let coef = binomial(k as u64, w as u64) as i64
                            - binomial((t + 1) as u64, (t - s + 1) as u64) as i64 * (k / (t + 1)) as i64;
                        let mut terms = self.layer_terms(w, s);
                        terms.push((k, coef));
                        out.push(Linear {
                            id: Constraint::Refined {
                                w,
                                s,
                                form: RefinedForm::Upward,
                            },
                            terms,
                            rhs: cn(w),
                        });
                    }
                    if s < t || literal {
                        let k = w - s - 1;
                        let top = n - w + s + 1;
                        let coef = binomial(top as u64, (s + 1) as u64) as i64
                            - binomial((t + 1) as u64, (t - s) as u64) as i64 * (top / (t + 1)) as i64;
                        let mut terms = self.layer_terms(w, s);
                        terms.push((k, coef));
                        out.push(Linear {
                            id: Constraint::Refined {
                                w,
                                s,
                                form: RefinedForm::Downward,
                            },
                            terms,
                            rhs: cn(w),
                        });
                    }
                }
            }
        }
        (out, skipped)
    }

    /// Evaluates every inequality (including base and cardinality) on `z`.
    pub fn check(&self, z: &WeightDistribution) -> Result<CheckReport, BoundError> {
        if z.counts().len() != self.n + 1 {
            return Err(BoundError::LengthMismatch {
                expected: self.n + 1,
                found: z.counts().len(),
            });
        }
        let mut violations = Vec::new();
        if z.get(0) != 1 {
            violations.push(Constraint::Base { index: 0 });
        }
        for i in 1..=self.t {
            if z.get(i) != 0 {
                violations.push(Constraint::Base { index: i });
            }
        }
        let (system, skipped) = self.system();
        for lin in &system {
            let lhs: i64 = lin.terms.iter().map(|&(k, c)| c * z.get(k) as i64).sum();
            if lhs > lin.rhs {
                violations.push(lin.id);
            }
        }
        if z.total() != self.m {
            violations.push(Constraint::Cardinality);
        }
        Ok(CheckReport { violations, skipped })
    }

    fn search(&self, min_free: i64, visit: &mut dyn FnMut(&[u64], i64) -> i64) {
        let (n, t) = (self.n, self.t);
        let (system, _) = self.system();
        let full = 1i64 << n;
        let cost: Vec<i64> = (0..=n).map(|i| ball_size(i, t) as i64).collect();
        let caps: Vec<u64> = (0..=n).map(|i| self.cw.upper(n, i)).collect();

        // constraints indexed by their lightest variable with a nonzero coefficient;
        // partial sums only prune when every coefficient is nonnegative
        let mut at_index: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        let mut partial_ok: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        for (ci, lin) in system.iter().enumerate() {
            let nz: Vec<usize> = lin.terms.iter().filter(|t| t.1 != 0).map(|t| t.0).collect();
            let Some(&lo) = nz.iter().min() else {
                if lin.rhs < 0 {
                    return;
                }
                continue;
            };
            at_index[lo].push(ci);
            if lin.terms.iter().all(|t| t.1 >= 0) {
                for &k in &nz {
                    if k != lo && !partial_ok[k].contains(&ci) {
                        partial_ok[k].push(ci);
                    }
                }
            }
        }

        struct State<'a> {
            t: usize,
            full: i64,
            cost: &'a [i64],
            caps: &'a [u64],
            system: &'a [Linear],
            at_index: &'a [Vec<usize>],
            partial_ok: &'a [Vec<usize>],
            z: Vec<u64>,
            threshold: i64,
        }

        impl State<'_> {
            fn lhs(&self, ci: usize) -> i64 {
                self.system[ci].terms.iter().map(|&(k, c)| c * self.z[k] as i64).sum()
            }

            fn ok_at(&self, i: usize) -> bool {
                self.at_index[i].iter().chain(&self.partial_ok[i]).all(|&ci| self.lhs(ci) <= self.system[ci].rhs)
            }

            /// Cheapest way to place `rem` words at weights `t+1..=top`.
            fn min_cost(&self, top: usize, mut rem: u64) -> Option<i64> {
                let mut c = 0;
                for w in self.t + 1..=top {
                    if rem == 0 {
                        break;
                    }
                    let k = rem.min(self.caps[w]);
                    c += k as i64 * self.cost[w];
                    rem -= k;
                }
                (rem == 0).then_some(c)
            }

            fn rec(&mut self, i: usize, rem: u64, used: i64, visit: &mut dyn FnMut(&[u64], i64) -> i64) {
                if i == self.t {
                    if rem != 0 {
                        return;
                    }
                    for k in (0..=self.t).rev() {
                        if !self.ok_at(k) {
                            return;
                        }
                    }
                    let f = self.full - used;
                    if f >= self.threshold {
                        self.threshold = self.threshold.max(visit(&self.z, f));
                    }
                    return;
                }
                match self.min_cost(i, rem) {
                    Some(c) if self.full - used - c >= self.threshold => {}
                    _ => return,
                }
                let hi = if i == self.t + 1 { rem } else { rem.min(self.caps[i]) };
                let lo = if i == self.t + 1 { rem } else { 0 };
                if lo > hi {
                    return;
                }
                for c in lo..=hi {
                    self.z[i] = c;
                    if self.ok_at(i) {
                        self.rec(i - 1, rem - c, used + c as i64 * self.cost[i], visit);
                    } else if self.partial_only_grows(i) {
                        break;
                    }
                }
                self.z[i] = 0;
            }

            /// Raising `z_i` further cannot repair a violation at index `i`.
            fn partial_only_grows(&self, i: usize) -> bool {
                self.partial_ok[i]
                    .iter()
                    .chain(&self.at_index[i])
                    .filter(|&&ci| self.lhs(ci) > self.system[ci].rhs)
                    .all(|&ci| self.system[ci].terms.iter().all(|t| t.1 >= 0))
            }
        }

        let mut z = vec![0u64; n + 1];
        z[0] = 1;
        let mut st = State {
            t,
            full,
            cost: &cost,
            caps: &caps,
            system: &system,
            at_index: &at_index,
            partial_ok: &partial_ok,
            z,
            threshold: min_free,
        };
        st.rec(n, self.m - 1, cost[0], visit);
    }

    /// Maximum free points over all feasible distributions.
    pub fn upper_bound(&self) -> Result<BoundResult, BoundError> {
        let (f, z) = self.maximize().ok_or(BoundError::Infeasible {
            n: self.n,
            m: self.m,
            t: self.t,
        })?;
        let refined_binding = match self.refined {
            RefinedRange::Off => false,
            _ => self
                .clone()
                .with_refined(RefinedRange::Off)
                .maximize()
                .is_some_and(|(g, _)| g > f),
        };
        Ok(BoundResult {
            free_points: f,
            distribution: z,
            refined_binding,
        })
    }

    fn maximize(&self) -> Option<(i64, WeightDistribution)> {
        let mut best: Option<(i64, Vec<u64>)> = None;
        self.search(i64::MIN, &mut |z, f| {
            if best.as_ref().is_none_or(|b| f > b.0) {
                best = Some((f, z.to_vec()));
            }
            f + 1
        });
        best.map(|(f, z)| (f, WeightDistribution::new(z)))
    }

    /// Every feasible distribution with at least `min_free` free points,
    /// best first (ties in enumeration order).
    pub fn feasible_distributions(&self, min_free: i64) -> Vec<(i64, WeightDistribution)> {
        let mut all = Vec::new();
        self.search(min_free, &mut |z, f| {
            all.push((f, WeightDistribution::new(z.to_vec())));
            min_free
        });
        all.sort_by_key(|e| core::cmp::Reverse(e.0));
        all
    }
}

/// Convenience wrapper for [`BoundProblem::check`].
pub fn check_distribution(z: &WeightDistribution, p: &BoundProblem) -> Result<CheckReport, BoundError> {
    p.check(z)
}

/// Convenience wrapper for [`BoundProblem::upper_bound`].
pub fn upper_bound_free_points(p: &BoundProblem) -> Result<BoundResult, BoundError> {
    p.upper_bound()
}

/// Largest `M` admitting a feasible distribution: an upper bound on the
/// size of a `t`-asymmetric-error-correcting code of length `n`.
pub fn max_feasible_cardinality(n: usize, t: usize) -> Result<u64, BoundError> {
    let p = BoundProblem::new(n, 1, t)?;
    let mut m = 1;
    while p.with_cardinality(m + 1)?.maximize().is_some() {
        m += 1;
    }
    Ok(m)
}

/// Free-point bound for every cardinality `1..=M_max`, sharing one table.
pub fn free_point_profile(n: usize, t: usize) -> Result<Vec<(u64, i64)>, BoundError> {
    let p = BoundProblem::new(n, 1, t)?;
    let mut out = Vec::new();
    let mut m = 1;
    while let Some((f, _)) = p.with_cardinality(m)?.maximize() {
        out.push((m, f));
        m += 1;
    }
    Ok(out)
}

/// Hamming-type bound `floor(2^n / (n + 1))` on messages over a binary
/// symmetric channel with one error, with or without feedback.
pub fn hamming_bound_adaptive(n: usize) -> u64 {
    assert!(n < 64);
    (1u64 << n) / (n as u64 + 1)
}

/// One-line summary such as `F<=16 at 1+0+3+4+3+0+1`.
pub fn describe(result: &BoundResult) -> String {
    format!("F<={} at {}", result.free_points, result.distribution)
}
