//! Exact oracles for the one-lie search games behind complete feedback.
//!
//! A position is `(a, b, n)`: `a` candidates that have not lied, `b` that
//! have used their single lie, `n` questions left. The questioner wins when
//! at most one candidate remains after the last answer.
//!
//! Winnability is monotone in `b`, so for each `(a, n)` it suffices to store
//! the largest winnable `b`. Both branches of a question split `b` freely,
//! which collapses the search over `(a1, b1)` into a scan over `a1`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Game {
    /// Any answer may be the lie (binary symmetric channel).
    Symmetric,
    /// Only a true "yes" can be turned into "no" (Z-channel).
    HalfLie,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GameState {
    pub a: u64,
    pub b: u64,
    pub n: usize,
}

impl GameState {
    pub fn new(a: u64, b: u64, n: usize) -> Self {
        GameState { a, b, n }
    }

    /// Positions after a question containing `a1` truthful and `b1` lied
    /// candidates: (answer "yes", answer "no").
    pub fn children(&self, game: Game, a1: u64, b1: u64) -> (GameState, GameState) {
        let (a, b, n) = (self.a, self.b, self.n - 1);
        match game {
            Game::Symmetric => (
                GameState::new(a1, b1 + (a - a1), n),
                GameState::new(a - a1, b - b1 + a1, n),
            ),
            Game::HalfLie => (GameState::new(a1, b1, n), GameState::new(a - a1, b - b1 + a1, n)),
        }
    }
}

/// Necessary condition for the symmetric game: `a(n+1) + b <= 2^n`.
pub fn berlekamp_volume_ok(s: GameState) -> bool {
    let cap = if s.n >= 64 { u128::MAX } else { 1u128 << s.n };
    u128::from(s.a) * (s.n as u128 + 1) + u128::from(s.b) <= cap
}

/// Threshold table, grown one question count at a time.
#[derive(Clone, Debug)]
pub struct Oracle {
    game: Game,
    /// `levels[n][a]` is the largest winnable `b`; entries stop at the first
    /// losing `a`, and every larger `a` loses.
    levels: Vec<Vec<u64>>,
}

impl Oracle {
    pub fn new(game: Game) -> Self {
        Oracle {
            game,
            levels: vec![vec![1, 0]],
        }
    }

    pub fn game(&self) -> Game {
        self.game
    }

    fn ensure(&mut self, n: usize) {
        while self.levels.len() <= n {
            let next = self.next_level();
            self.levels.push(next);
        }
    }

    fn next_level(&self) -> Vec<u64> {
        let prev = self.levels.last().expect("base level");
        let get = |a: u64| prev.get(a as usize).map(|&b| b as i64).unwrap_or(-1);
        let mut out = Vec::new();
        for a in 0u64.. {
            let mut best = -1i64;
            let top = if self.game == Game::Symmetric { a / 2 } else { a };
            for a1 in 0..=top {
                let (x, y) = (get(a1), get(a - a1));
                let (ok, v) = match self.game {
                    Game::Symmetric => (x >= (a - a1) as i64 && y >= a1 as i64, x + y - a as i64),
                    Game::HalfLie => (x >= 0 && y >= a1 as i64, x + y - a1 as i64),
                };
                if ok && v > best {
                    best = v;
                }
            }
            if best < 0 {
                break;
            }
            out.push(best as u64);
        }
        out
    }

    /// Largest `b` with `(a, b, n)` winnable, or `None` if even `b = 0` loses.
    pub fn threshold(&mut self, a: u64, n: usize) -> Option<u64> {
        self.ensure(n);
        self.levels[n].get(a as usize).copied()
    }

    pub fn winnable(&mut self, s: GameState) -> bool {
        self.threshold(s.a, s.n).is_some_and(|b| s.b <= b)
    }

    /// Largest `M` such that `M` messages can be sent in `n` uses.
    pub fn max_messages(&mut self, n: usize) -> u64 {
        self.ensure(n);
        self.levels[n].len() as u64 - 1
    }
}

pub fn symmetric_winnable(s: GameState) -> bool {
    Oracle::new(Game::Symmetric).winnable(s)
}

pub fn halflie_winnable(s: GameState) -> bool {
    Oracle::new(Game::HalfLie).winnable(s)
}

pub fn max_messages(game: Game, n: usize) -> u64 {
    Oracle::new(game).max_messages(n)
}

/// Direct memoised search over every question `(a1, b1)`. Exponentially
/// slower than [`Oracle`]; kept as an independent check for small `n`.
pub fn winnable_direct(game: Game, s: GameState, memo: &mut BTreeMap<GameState, bool>) -> bool {
    if s.n == 0 {
        return s.a + s.b <= 1;
    }
    if game == Game::Symmetric && !berlekamp_volume_ok(s) {
        return false;
    }
    if s.a + s.b > 1 << s.n.min(62) {
        return false;
    }
    if let Some(&v) = memo.get(&s) {
        return v;
    }
    let mut win = false;
    'outer: for a1 in 0..=s.a {
        for b1 in 0..=s.b {
            let (yes, no) = s.children(game, a1, b1);
            if winnable_direct(game, yes, memo) && winnable_direct(game, no, memo) {
                win = true;
                break 'outer;
            }
        }
    }
    memo.insert(s, win);
    win
}
