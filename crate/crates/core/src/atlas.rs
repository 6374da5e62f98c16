use crate::error::{Error, Result};
use crate::point::{CoordinateTag, Point};
use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

/// A single-edge coordinate conversion.
pub type ConvertFn = Arc<dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync>;

/// Registry of coordinate systems and directed conversion maps.
///
/// Conversions between non-adjacent tags compose single edges along a
/// breadth-first shortest path, so registering λ→θ and θ→η is enough to
/// reach η from λ. Storage is ordered, which keeps path choice (and thus
/// floating-point output) deterministic.
pub struct Atlas {
    lengths: BTreeMap<CoordinateTag, usize>,
    edges: BTreeMap<CoordinateTag, BTreeMap<CoordinateTag, ConvertFn>>,
}

impl Atlas {
    pub fn new() -> Self {
        Atlas { lengths: BTreeMap::new(), edges: BTreeMap::new() }
    }

    /// Registers a coordinate system and the length of its data vectors
    /// (which may differ from the manifold dimension, e.g. a full
    /// probability vector for a simplex of dimension k−1).
    pub fn register_tag(&mut self, tag: CoordinateTag, data_len: usize) {
        self.lengths.insert(tag, data_len);
    }

    /// Registers a one-step conversion. Both tags must already be known.
    pub fn register_edge(
        &mut self,
        from: &CoordinateTag,
        to: &CoordinateTag,
        map: ConvertFn,
    ) -> Result<()> {
        for tag in [from, to] {
            if !self.lengths.contains_key(tag) {
                return Err(Error::UnknownCoords { tag: tag.name().to_string() });
            }
        }
        self.edges.entry(from.clone()).or_default().insert(to.clone(), map);
        Ok(())
    }

    pub fn has_tag(&self, tag: &CoordinateTag) -> bool {
        self.lengths.contains_key(tag)
    }

    /// Data vector length for a registered tag.
    pub fn data_len(&self, tag: &CoordinateTag) -> Result<usize> {
        self.lengths
            .get(tag)
            .copied()
            .ok_or_else(|| Error::UnknownCoords { tag: tag.name().to_string() })
    }

    /// Registered tags in deterministic order.
    pub fn tags(&self) -> impl Iterator<Item = &CoordinateTag> {
        self.lengths.keys()
    }

    /// Converts a point to `target` coordinates along a shortest edge path.
    pub fn convert(&self, p: &Point, target: &CoordinateTag) -> Result<Point> {
        let expected = self.data_len(&p.coords)?;
        if p.data.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: p.data.len() });
        }
        if !self.has_tag(target) {
            return Err(Error::UnknownCoords { tag: target.name().to_string() });
        }
        if &p.coords == target {
            return Ok(p.clone());
        }
        let path = self.shortest_path(&p.coords, target)?;
        let mut data = p.data.clone();
        let mut at = p.coords.clone();
        for next in path {
            let map = &self.edges[&at][&next];
            data = map(&data)?;
            at = next;
        }
        Point::new(at, data)
    }

    /// BFS over conversion edges; returns the tags after `from`, in order.
    fn shortest_path(
        &self,
        from: &CoordinateTag,
        to: &CoordinateTag,
    ) -> Result<Vec<CoordinateTag>> {
        let mut prev: BTreeMap<CoordinateTag, CoordinateTag> = BTreeMap::new();
        let mut queue = VecDeque::new();
        queue.push_back(from.clone());
        prev.insert(from.clone(), from.clone());
        while let Some(cur) = queue.pop_front() {
            if &cur == to {
                let mut path = Vec::new();
                let mut at = cur;
                while &at != from {
                    path.push(at.clone());
                    at = prev[&at].clone();
                }
                path.reverse();
                return Ok(path);
            }
            if let Some(nexts) = self.edges.get(&cur) {
                for next in nexts.keys() {
                    if !prev.contains_key(next) {
                        prev.insert(next.clone(), cur.clone());
                        queue.push_back(next.clone());
                    }
                }
            }
        }
        Err(Error::NoConversionPath {
            from: from.name().to_string(),
            to: to.name().to_string(),
        })
    }
}

impl Default for Atlas {
    fn default() -> Self {
        Atlas::new()
    }
}
