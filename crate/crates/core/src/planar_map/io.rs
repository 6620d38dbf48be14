//! JSON and DOT forms of a rooted map with an edge subset.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{EdgeSubset, RootedMap};
use crate::error::{Error, Result};

pub const MAP_FORMAT_VERSION: u32 = 1;

/// Serialized map. `t` has one `0`/`1` character per half-edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub version: u32,
    pub opposite: Vec<usize>,
    pub next_around_vertex: Vec<usize>,
    pub root: usize,
    pub t: String,
}

impl MapJson {
    pub fn from_map(m: &RootedMap, t: &EdgeSubset) -> Self {
        MapJson {
            version: MAP_FORMAT_VERSION,
            opposite: m.alpha_slice().to_vec(),
            next_around_vertex: m.sigma_slice().to_vec(),
            root: m.root(),
            t: t.flags().iter().map(|&b| if b { '1' } else { '0' }).collect(),
        }
    }

    pub fn into_map(self) -> Result<(RootedMap, EdgeSubset)> {
        if self.version != MAP_FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported map version {}", self.version)));
        }
        let m = RootedMap::new(self.next_around_vertex, self.opposite, self.root)?;
        let flags = parse_bits(&self.t)?;
        let t = EdgeSubset::from_flags(&m, flags)?;
        Ok((m, t))
    }
}

fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Parse(format!("bad subset flag {c:?}"))),
        })
        .collect()
}

impl RootedMap {
    pub fn to_json(&self, t: &EdgeSubset) -> String {
        serde_json::to_string(&MapJson::from_map(self, t)).expect("plain struct serializes")
    }

    pub fn from_json(s: &str) -> Result<(RootedMap, EdgeSubset)> {
        serde_json::from_str::<MapJson>(s)?.into_map()
    }

    /// Undirected DOT graph. Each vertex lists its half-edges in rotation
    /// order; each edge names its two half-edges (tail first) and whether it
    /// is in the subset. Subset edges are drawn solid, others dashed.
    pub fn to_dot(&self, t: &EdgeSubset) -> String {
        let (vid, nv) = self.vertex_ids();
        let mut out = String::new();
        let _ = writeln!(out, "graph map {{");
        let _ = writeln!(
            out,
            "  graph [version={}, half_edges={}, root={}];",
            MAP_FORMAT_VERSION,
            self.half_edge_count(),
            self.root()
        );
        let mut first = vec![usize::MAX; nv];
        for h in 0..self.half_edge_count() {
            if first[vid[h]] == usize::MAX {
                first[vid[h]] = h;
            }
        }
        for (v, &start) in first.iter().enumerate() {
            let mut rot = vec![start];
            let mut h = self.sigma(start);
            while h != start {
                rot.push(h);
                h = self.sigma(h);
            }
            let rot: Vec<String> = rot.iter().map(|h| h.to_string()).collect();
            let _ = writeln!(out, "  v{v} [rotation=\"{}\"];", rot.join(" "));
        }
        for h in 0..self.half_edge_count() {
            let o = self.alpha(h);
            if h > o {
                continue;
            }
            let in_t = t.contains(h);
            let root = if h == self.root() || o == self.root() { ", root=true" } else { "" };
            let _ = writeln!(
                out,
                "  v{} -- v{} [half_edges=\"{h} {o}\", in_t={}, style={}{root}];",
                vid[h],
                vid[o],
                in_t as u8,
                if in_t { "solid" } else { "dashed" },
            );
        }
        out.push_str("}\n");
        out
    }

    /// Reads the DOT form written by [`to_dot`](Self::to_dot). Blank lines
    /// and `//` comment lines are ignored.
    pub fn from_dot(s: &str) -> Result<(RootedMap, EdgeSubset)> {
        let mut lines = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with("//"));
        if lines.next() != Some("graph map {") {
            return Err(Error::Parse("expected `graph map {`".into()));
        }
        let mut header: Option<BTreeMap<String, String>> = None;
        let mut rotations: Vec<Vec<usize>> = Vec::new();
        let mut edges: Vec<(usize, usize, bool)> = Vec::new();
        let mut closed = false;
        for line in lines {
            if closed {
                return Err(Error::Parse("content after closing brace".into()));
            }
            if line == "}" {
                closed = true;
                continue;
            }
            let body = line
                .strip_suffix("];")
                .ok_or_else(|| Error::Parse(format!("line does not end with `];`: {line}")))?;
            let (head, attrs) = body
                .split_once(" [")
                .ok_or_else(|| Error::Parse(format!("missing attribute list: {line}")))?;
            let attrs = parse_attrs(attrs)?;
            if head == "graph" {
                header = Some(attrs);
            } else if let Some((a, b)) = head.split_once(" -- ") {
                parse_vertex(a)?;
                parse_vertex(b)?;
                let pair = numbers(get(&attrs, "half_edges")?)?;
                if pair.len() != 2 {
                    return Err(Error::Parse("edge needs two half-edges".into()));
                }
                let in_t = match get(&attrs, "in_t")? {
                    "0" => false,
                    "1" => true,
                    other => return Err(Error::Parse(format!("bad in_t {other:?}"))),
                };
                edges.push((pair[0], pair[1], in_t));
            } else {
                let v = parse_vertex(head)?;
                if v != rotations.len() {
                    return Err(Error::Parse(format!("vertex v{v} out of order")));
                }
                rotations.push(numbers(get(&attrs, "rotation")?)?);
            }
        }
        if !closed {
            return Err(Error::Parse("missing closing brace".into()));
        }
        let header = header.ok_or_else(|| Error::Parse("missing graph attributes".into()))?;
        let num = |k: &str| -> Result<usize> {
            get(&header, k)?
                .parse()
                .map_err(|_| Error::Parse(format!("bad {k}")))
        };
        if num("version")? != MAP_FORMAT_VERSION as usize {
            return Err(Error::Parse("unsupported map version".into()));
        }
        let n = num("half_edges")?;
        let root = num("root")?;
        if n > 1 << 24 {
            return Err(Error::Parse("too many half-edges".into()));
        }
        const UNSET: usize = usize::MAX;
        let mut sigma = vec![UNSET; n];
        for rot in &rotations {
            for (k, &h) in rot.iter().enumerate() {
                let next = rot[(k + 1) % rot.len()];
                if h >= n || next >= n || sigma[h] != UNSET {
                    return Err(Error::Parse(format!("half-edge {h} misplaced in rotations")));
                }
                sigma[h] = next;
            }
        }
        let mut alpha = vec![UNSET; n];
        let mut flags = vec![false; n];
        for &(a, b, in_t) in &edges {
            if a >= n || b >= n || alpha[a] != UNSET || alpha[b] != UNSET {
                return Err(Error::Parse(format!("edge {a} {b} misplaced")));
            }
            alpha[a] = b;
            alpha[b] = a;
            flags[a] = in_t;
            flags[b] = in_t;
        }
        if sigma.contains(&UNSET) || alpha.contains(&UNSET) {
            return Err(Error::Parse("some half-edge is missing".into()));
        }
        let m = RootedMap::new(sigma, alpha, root)?;
        let t = EdgeSubset::from_flags(&m, flags)?;
        Ok((m, t))
    }
}

fn get<'a>(attrs: &'a BTreeMap<String, String>, key: &str) -> Result<&'a str> {
    attrs
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::Parse(format!("missing attribute {key}")))
}

fn parse_vertex(s: &str) -> Result<usize> {
    s.strip_prefix('v')
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad vertex name {s:?}")))
}

fn numbers(s: &str) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad number {t:?}"))))
        .collect()
}

/// `k=v, k="a b", ...`
fn parse_attrs(s: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let (key, after) = rest
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("attribute without value: {rest}")))?;
        let (value, after) = if let Some(q) = after.strip_prefix('"') {
            let end = q
                .find('"')
                .ok_or_else(|| Error::Parse("unterminated quote".into()))?;
            (&q[..end], &q[end + 1..])
        } else {
            match after.find(',') {
                Some(i) => (&after[..i], &after[i..]),
                None => (after, ""),
            }
        };
        out.insert(key.trim().to_string(), value.to_string());
        rest = after.trim_start();
        rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar_map::word_to_map;

    #[test]
    fn json_and_dot_round_trip() {
        let (m, t) = word_to_map(&"hhcFFcFF".parse().unwrap()).unwrap();
        let json = m.to_json(&t);
        assert_eq!(RootedMap::from_json(&json).unwrap(), (m.clone(), t.clone()));
        let dot = m.to_dot(&t);
        assert_eq!(RootedMap::from_dot(&dot).unwrap(), (m.clone(), t.clone()));
        let commented = format!("// run config\n{dot}");
        assert_eq!(RootedMap::from_dot(&commented).unwrap(), (m, t));
    }

    #[test]
    fn rejects_malformed() {
        assert!(RootedMap::from_json("{}").is_err());
        let bad = r#"{"version":1,"opposite":[1,0],"next_around_vertex":[0,1],"root":0,"t":"10"}"#;
        assert!(RootedMap::from_json(bad).is_err());
        assert!(RootedMap::from_dot("graph map {\n}\n").is_err());
    }
}
