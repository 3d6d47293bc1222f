use serde::{Deserialize, Serialize};

use super::method::{Family, MethodSpec};

/// A radial order / angular repetition pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrderIndex {
    pub n: i32,
    pub m: i32,
}

impl OrderIndex {
    pub const fn new(n: i32, m: i32) -> Self {
        OrderIndex { n, m }
    }
}

/// The order set `S(K)` of a method, sorted lexicographically by `(n, m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderSet {
    pub method: MethodSpec,
    pub k: usize,
    pub indices: Vec<OrderIndex>,
}

impl OrderSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Position of `idx` in the set.
    pub fn position(&self, idx: OrderIndex) -> Option<usize> {
        self.indices.binary_search(&idx).ok()
    }
}

/// Enumerates `S(K)` for `method`.
pub fn order_set(method: &MethodSpec, k: usize) -> OrderSet {
    let k = k as i32;
    let n_range = match method.family() {
        Family::Efm | Family::Pcet | Family::Gpcet => -k..=k,
        _ => 0..=k,
    };
    let mut indices = Vec::new();
    for n in n_range {
        let m_bound = match method.family() {
            Family::Zm | Family::Pzm => n,
            _ => k,
        };
        for m in -m_bound..=m_bound {
            if method.is_legal(n, m) {
                indices.push(OrderIndex { n, m });
            }
        }
    }
    OrderSet {
        method: *method,
        k: k as usize,
        indices,
    }
}

/// Closed-form `|S(K)|`.
pub fn order_set_cardinality(family: Family, k: usize) -> usize {
    match family {
        Family::Zm => (k + 1) * (k + 2) / 2,
        Family::Pzm => (k + 1) * (k + 1),
        Family::Efm | Family::Pcet | Family::Gpcet => (2 * k + 1) * (2 * k + 1),
        Family::Pst | Family::Gpst => k * (2 * k + 1),
        _ => (k + 1) * (2 * k + 1),
    }
}
