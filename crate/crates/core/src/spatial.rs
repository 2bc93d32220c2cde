//! Spatial operators of the logic, evaluated globally over a whole grid.
//!
//! Reachability is never computed by enumerating paths. `may_reach` uses
//! closure plus the connected components of the `through` set: a voxel can
//! reach `target` iff it is near `target`, or near a `through`-component
//! that is itself near `target`.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::grid::{Adjacency, BoolImage, GridDims, ScalarImage};

/// Closure (one-step dilation) of `b` under `adj`.
pub fn closure(b: &BoolImage, adj: Adjacency) -> BoolImage {
    let dims = b.dims();
    let (w, h) = (dims.width(), dims.height());
    let src = b.bits();
    // horizontal pass: voxel or its left/right neighbour
    let mut horiz = vec![false; src.len()];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        let out = &mut horiz[y * w..(y + 1) * w];
        for x in 0..w {
            out[x] = row[x] || (x > 0 && row[x - 1]) || (x + 1 < w && row[x + 1]);
        }
    }
    let column_src: &[bool] = match adj {
        Adjacency::Orthodiagonal => &horiz,
        Adjacency::Orthogonal => src,
    };
    let mut out = horiz.clone();
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if out[i] {
                continue;
            }
            out[i] = (y > 0 && column_src[i - w]) || (y + 1 < h && column_src[i + w]);
        }
    }
    BoolImage::new(dims, out).expect("closure preserves dims")
}

/// Interior: voxels whose whole neighbourhood lies in `b`.
pub fn interior(b: &BoolImage, adj: Adjacency) -> BoolImage {
    closure(&b.not(), adj).not()
}

/// Connected-component labelling. Label 0 is background; components are
/// numbered `1..=count` in order of their first voxel in a row-major scan.
#[derive(Clone, PartialEq, Eq)]
pub struct LabelImage {
    dims: GridDims,
    labels: Vec<u32>,
    count: usize,
}

impl LabelImage {
    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.labels[self.dims.index(x, y)]
    }

    /// Number of components.
    pub fn count(&self) -> usize {
        self.count
    }

    /// Voxel count of each component; entry `i` belongs to label `i + 1`.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.count];
        for &l in &self.labels {
            if l > 0 {
                sizes[l as usize - 1] += 1;
            }
        }
        sizes
    }

    /// Union of the components whose label satisfies `keep`.
    pub fn select(&self, keep: impl Fn(u32) -> bool) -> BoolImage {
        let bits = self.labels.iter().map(|&l| l > 0 && keep(l)).collect();
        BoolImage::new(self.dims, bits).expect("same dims")
    }
}

impl fmt::Debug for LabelImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabelImage {} ({} components)", self.dims, self.count)
    }
}

pub fn connected_components(b: &BoolImage, adj: Adjacency) -> LabelImage {
    let dims = b.dims();
    let bits = b.bits();
    let mut labels = vec![0u32; bits.len()];
    let mut queue = VecDeque::new();
    let mut next = 0u32;
    for start in 0..bits.len() {
        if !bits[start] || labels[start] != 0 {
            continue;
        }
        next += 1;
        labels[start] = next;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            let (x, y) = dims.coords(i);
            adj.for_each_neighbour(dims, x, y, |n| {
                if bits[n] && labels[n] == 0 {
                    labels[n] = next;
                    queue.push_back(n);
                }
            });
        }
    }
    LabelImage {
        dims,
        labels,
        count: next as usize,
    }
}

/// Voxels from which some path reaches `target`, every strictly
/// intermediate step lying in `through`.
pub fn may_reach_fwd(target: &BoolImage, through: &BoolImage, adj: Adjacency) -> Result<BoolImage> {
    target.dims().check(&through.dims())?;
    let near_target = closure(target, adj);
    let components = connected_components(through, adj);
    let mut touched = vec![false; components.count() + 1];
    for (&l, &near) in components.labels().iter().zip(near_target.bits()) {
        if near && l > 0 {
            touched[l as usize] = true;
        }
    }
    let seeds = components.select(|l| touched[l as usize]);
    near_target.or(&closure(&seeds, adj))
}

/// Voxels reachable by a path that starts in `source`, with every strictly
/// intermediate step in `through`. Adjacency is symmetric, so this is the
/// forward relation read backwards.
pub fn may_reach_bwd(source: &BoolImage, through: &BoolImage, adj: Adjacency) -> Result<BoolImage> {
    may_reach_fwd(source, through, adj)
}

/// `f1 S f2`: voxels of `f1` that cannot escape `f1 ∪ f2` without first
/// crossing `f2`.
pub fn surrounded(f1: &BoolImage, f2: &BoolImage, adj: Adjacency) -> Result<BoolImage> {
    let outside = f1.or(f2)?.not();
    let escape = may_reach_fwd(&outside, &f2.not(), adj)?;
    f1.and_not(&escape)
}

/// Voxels of `f1` connected through `f1` to a voxel adjacent to `f2`.
pub fn touch(f1: &BoolImage, f2: &BoolImage, adj: Adjacency) -> Result<BoolImage> {
    f1.and(&may_reach_fwd(f2, f1, adj)?)
}

/// `f1` extended with the `f2`-regions touching it.
pub fn grow(f1: &BoolImage, f2: &BoolImage, adj: Adjacency) -> Result<BoolImage> {
    f1.or(&touch(f2, f1, adj)?)
}

/// City-block distance of every voxel to the nearest true voxel of `b`, in
/// voxel units. All-false input yields `+∞` everywhere.
pub fn distance_transform(b: &BoolImage) -> ScalarImage {
    let dims = b.dims();
    let (w, h) = (dims.width(), dims.height());
    let mut d: Vec<f64> = b
        .bits()
        .iter()
        .map(|&t| if t { 0.0 } else { f64::INFINITY })
        .collect();
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let mut v = d[i];
            if x > 0 {
                v = v.min(d[i - 1] + 1.0);
            }
            if y > 0 {
                v = v.min(d[i - w] + 1.0);
            }
            d[i] = v;
        }
    }
    for y in (0..h).rev() {
        for x in (0..w).rev() {
            let i = y * w + x;
            let mut v = d[i];
            if x + 1 < w {
                v = v.min(d[i + 1] + 1.0);
            }
            if y + 1 < h {
                v = v.min(d[i + w] + 1.0);
            }
            d[i] = v;
        }
    }
    ScalarImage::from_vec_unchecked(dims, d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparator {
    Lt,
    Leq,
    Geq,
    Gt,
}

impl Comparator {
    #[inline]
    pub fn holds(self, value: f64, bound: f64) -> bool {
        match self {
            Comparator::Lt => value < bound,
            Comparator::Leq => value <= bound,
            Comparator::Geq => value >= bound,
            Comparator::Gt => value > bound,
        }
    }
}

/// A half-line of distances, `comparator bound`, with `bound ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistInterval {
    comparator: Comparator,
    bound: f64,
}

impl DistInterval {
    pub fn new(comparator: Comparator, bound: f64) -> Result<Self> {
        if bound.is_nan() || bound < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "distance bound must be non-negative, got {bound}"
            )));
        }
        Ok(Self { comparator, bound })
    }

    pub fn comparator(&self) -> Comparator {
        self.comparator
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }
}

/// Voxels whose distance to `b` lies in `iv`.
pub fn dist_predicate(b: &BoolImage, iv: DistInterval) -> BoolImage {
    let dt = distance_transform(b);
    let bits = dt
        .values()
        .iter()
        .map(|&d| iv.comparator.holds(d, iv.bound))
        .collect();
    BoolImage::new(b.dims(), bits).expect("same dims")
}

/// `d<r (d≥r ¬b)`: drops regions narrower than `2r` and shaves protrusions.
pub fn smoothen(r: f64, b: &BoolImage) -> Result<BoolImage> {
    let far_inside = dist_predicate(&b.not(), DistInterval::new(Comparator::Geq, r)?);
    Ok(dist_predicate(
        &far_inside,
        DistInterval::new(Comparator::Lt, r)?,
    ))
}

/// Union of the largest connected components of `b` (all ties kept).
pub fn maxvol(b: &BoolImage, adj: Adjacency) -> BoolImage {
    let components = connected_components(b, adj);
    let sizes = components.sizes();
    let Some(&largest) = sizes.iter().max() else {
        return BoolImage::filled(b.dims(), false);
    };
    components.select(|l| sizes[l as usize - 1] == largest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridDims;

    fn dims(w: usize, h: usize) -> GridDims {
        GridDims::new(w, h).unwrap()
    }

    fn from_rows(rows: &[&str]) -> BoolImage {
        let d = dims(rows[0].len(), rows.len());
        BoolImage::from_fn(d, |x, y| rows[y].as_bytes()[x] == b'#')
    }

    #[test]
    fn closure_of_center_voxel() {
        let b = from_rows(&["...", ".#.", "..."]);
        assert_eq!(
            closure(&b, Adjacency::Orthodiagonal),
            BoolImage::filled(b.dims(), true)
        );
        assert_eq!(
            closure(&b, Adjacency::Orthogonal),
            from_rows(&[".#.", "###", ".#."])
        );
        let empty = BoolImage::filled(b.dims(), false);
        assert_eq!(closure(&empty, Adjacency::Orthodiagonal), empty);
    }

    #[test]
    fn interior_edge_cases() {
        let full = BoolImage::filled(dims(4, 4), true);
        assert_eq!(interior(&full, Adjacency::Orthogonal), full);
        let single = from_rows(&["...", ".#.", "..."]);
        for adj in [Adjacency::Orthogonal, Adjacency::Orthodiagonal] {
            assert!(interior(&single, adj).is_all_false());
        }
    }

    #[test]
    fn reach_through_nothing_is_closure() {
        let target = from_rows(&["....#"]);
        let none = BoolImage::filled(target.dims(), false);
        let r = may_reach_fwd(&target, &none, Adjacency::Orthodiagonal).unwrap();
        assert_eq!(r, closure(&target, Adjacency::Orthodiagonal));
        let all = BoolImage::filled(target.dims(), true);
        let r = may_reach_fwd(&target, &all, Adjacency::Orthodiagonal).unwrap();
        assert_eq!(r, all);
    }

    #[test]
    fn reach_needs_through_component_near_target() {
        let target = from_rows(&["....#"]);
        let through = from_rows(&["..#.."]);
        let r = may_reach_fwd(&target, &through, Adjacency::Orthogonal).unwrap();
        assert_eq!(r, from_rows(&["...##"]));
    }

    #[test]
    fn backward_reach_from_empty_source() {
        let src = BoolImage::filled(dims(3, 3), false);
        let through = BoolImage::filled(dims(3, 3), true);
        assert!(may_reach_bwd(&src, &through, Adjacency::Orthodiagonal)
            .unwrap()
            .is_all_false());
    }

    #[test]
    fn surrounded_degenerate_second_argument() {
        let f = from_rows(&["..#..", ".###.", "..#.."]);
        let all = BoolImage::filled(f.dims(), true);
        let none = BoolImage::filled(f.dims(), false);
        let adj = Adjacency::Orthodiagonal;
        assert_eq!(surrounded(&f, &all, adj).unwrap(), f);
        assert!(surrounded(&f, &none, adj).unwrap().is_all_false());
        assert_eq!(surrounded(&all, &none, adj).unwrap(), all);
    }

    #[test]
    fn touch_and_grow_degenerate() {
        let f = from_rows(&["##..", "....", "..##"]);
        let none = BoolImage::filled(f.dims(), false);
        let adj = Adjacency::Orthogonal;
        assert_eq!(touch(&f, &f, adj).unwrap(), f);
        assert!(touch(&f, &none, adj).unwrap().is_all_false());
        assert_eq!(grow(&f, &none, adj).unwrap(), f);
    }

    #[test]
    fn distance_transform_cases() {
        let none = BoolImage::filled(dims(5, 6), false);
        assert!(distance_transform(&none)
            .values()
            .iter()
            .all(|v| *v == f64::INFINITY));
        let mut one = none.clone();
        one.set(0, 0, true);
        assert_eq!(distance_transform(&one).get(3, 4), 7.0);
    }

    #[test]
    fn dist_predicates() {
        let b = from_rows(&["#....", ".....", "...#."]);
        assert_eq!(
            dist_predicate(&b, DistInterval::new(Comparator::Leq, 0.0).unwrap()),
            b
        );
        let none = BoolImage::filled(b.dims(), false);
        let far = dist_predicate(&none, DistInterval::new(Comparator::Geq, 1e9).unwrap());
        assert_eq!(far, BoolImage::filled(b.dims(), true));
        assert!(DistInterval::new(Comparator::Leq, -1.0).is_err());
    }

    #[test]
    fn smoothen_constant_and_zero_radius() {
        let all = BoolImage::filled(dims(6, 6), true);
        let none = BoolImage::filled(dims(6, 6), false);
        assert_eq!(smoothen(2.0, &all).unwrap(), all);
        assert_eq!(smoothen(2.0, &none).unwrap(), none);
        assert!(smoothen(0.0, &all).unwrap().is_all_false());
    }

    #[test]
    fn component_labels_are_row_major() {
        let b = from_rows(&["......", ".##...", ".##.##", "....##"]);
        let cc = connected_components(&b, Adjacency::Orthogonal);
        assert_eq!(cc.count(), 2);
        assert_eq!(cc.get(1, 1), 1);
        assert_eq!(cc.get(4, 2), 2);
        let none = BoolImage::filled(b.dims(), false);
        assert_eq!(connected_components(&none, Adjacency::Orthogonal).count(), 0);
    }

    #[test]
    fn diagonal_pair_depends_on_adjacency() {
        let b = from_rows(&["#.", ".#"]);
        assert_eq!(connected_components(&b, Adjacency::Orthodiagonal).count(), 1);
        assert_eq!(connected_components(&b, Adjacency::Orthogonal).count(), 2);
    }

    #[test]
    fn maxvol_keeps_largest_and_ties() {
        let b = from_rows(&["###....", ".....##", ".....##", ".....#."]);
        assert_eq!(
            maxvol(&b, Adjacency::Orthogonal),
            from_rows(&[".......", ".....##", ".....##", ".....#."])
        );
        let tie = from_rows(&["##..##", "##..##"]);
        assert_eq!(maxvol(&tie, Adjacency::Orthogonal), tie);
        let none = BoolImage::filled(tie.dims(), false);
        assert_eq!(maxvol(&none, Adjacency::Orthogonal), none);
    }
}
