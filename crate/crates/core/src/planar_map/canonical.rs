use super::{EdgeSubset, RootedMap};

pub const CANONICAL_VERSION: u8 = 1;

/// Byte string that identifies a rooted map with an edge subset up to
/// relabelling of half-edges.
///
/// Half-edges are renumbered in breadth-first order from the root, looking
/// at `sigma` before `alpha`. The encoding is the version byte, the number
/// of half-edges, then `sigma`, `alpha` and the subset flag for each new
/// label in turn (integers as little-endian `u32`).
pub fn canonical_form(m: &RootedMap, t: &EdgeSubset) -> Vec<u8> {
    let n = m.half_edge_count();
    let mut label = vec![u32::MAX; n];
    let mut order = Vec::with_capacity(n);
    label[m.root()] = 0;
    order.push(m.root());
    let mut head = 0;
    while head < order.len() {
        let h = order[head];
        head += 1;
        for next in [m.sigma(h), m.alpha(h)] {
            if label[next] == u32::MAX {
                label[next] = order.len() as u32;
                order.push(next);
            }
        }
    }
    let mut out = Vec::with_capacity(5 + 9 * n);
    out.push(CANONICAL_VERSION);
    out.extend_from_slice(&(n as u32).to_le_bytes());
    for &h in &order {
        out.extend_from_slice(&label[m.sigma(h)].to_le_bytes());
        out.extend_from_slice(&label[m.alpha(h)].to_le_bytes());
        out.push(t.contains(h) as u8);
    }
    out
}
