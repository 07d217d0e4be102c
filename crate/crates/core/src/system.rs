//! Ordered orthonormal systems and their windows.

use serde::Serialize;

use crate::poly::{BivariatePoly, Ordering2};

/// Index set a system spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    /// All `x^i y^j` with `i + j <= n`.
    Total { n: usize },
    /// `Pi_{n,m}`: `i <= n`, `j <= m`.
    Rect { n: usize, m: usize },
}

impl Window {
    /// Exponent pairs of the window in increasing `ord` order.
    pub fn indices(self, ord: Ordering2) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = match self {
            Window::Total { n } => (0..=n)
                .flat_map(|d| (0..=d).map(move |i| (i, d - i)))
                .collect(),
            Window::Rect { n, m } => (0..=n)
                .flat_map(|i| (0..=m).map(move |j| (i, j)))
                .collect(),
        };
        v.sort_by(|a, b| ord.cmp(*a, *b));
        v
    }

    pub fn len(self) -> usize {
        match self {
            Window::Total { n } => (n + 1) * (n + 2) / 2,
            Window::Rect { n, m } => (n + 1) * (m + 1),
        }
    }

    pub fn is_empty(self) -> bool {
        false
    }

    /// Largest x- and y-degree in the window.
    pub fn degrees(self) -> (usize, usize) {
        match self {
            Window::Total { n } => (n, n),
            Window::Rect { n, m } => (n, m),
        }
    }
}

/// Where a system entry came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// `q_k U_j` products and their mirrors.
    ClosedForm,
    /// High-band elimination.
    Elimination,
    /// Gram-Schmidt on quadrature moments.
    Oracle,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrthoEntry {
    /// Leading exponent pair in the system's ordering.
    pub index: (usize, usize),
    pub poly: BivariatePoly,
    /// Norm of the unnormalized polynomial (1 for oracle entries).
    pub norm: f64,
    pub source: Source,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrthoSystem {
    pub ordering: Ordering2,
    pub window: Window,
    pub entries: Vec<OrthoEntry>,
}

impl OrthoSystem {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: (usize, usize)) -> Option<&OrthoEntry> {
        self.entries.iter().find(|e| e.index == index)
    }

    pub fn polys(&self) -> impl Iterator<Item = &BivariatePoly> {
        self.entries.iter().map(|e| &e.poly)
    }

    /// Entries whose index satisfies `pred`, in system order.
    pub fn select(&self, pred: impl Fn((usize, usize)) -> bool) -> Vec<&BivariatePoly> {
        self.entries
            .iter()
            .filter(|e| pred(e.index))
            .map(|e| &e.poly)
            .collect()
    }
}
