use std::cmp::Ordering;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Volume dominated by `points` inside the box bounded by `reference`
/// (minimisation). Points not strictly below the reference in every
/// coordinate contribute nothing.
///
/// Sweeps the third coordinate upward while keeping the 2-D staircase of the
/// first two coordinates and its area up to date, `O(n log n)` overall.
pub fn hypervolume_3d(points: &[[f64; 3]], reference: [f64; 3]) -> f64 {
    let mut pts: Vec<[f64; 3]> = points
        .iter()
        .filter(|p| p.iter().zip(&reference).all(|(a, r)| a < r))
        .copied()
        .collect();
    pts.sort_by(|a, b| {
        a[2].total_cmp(&b[2])
            .then(a[0].total_cmp(&b[0]))
            .then(a[1].total_cmp(&b[1]))
    });

    let [rx, ry, rz] = reference;
    let mut stair: BTreeMap<Key, f64> = BTreeMap::new();
    let mut area = 0.0;
    let mut volume = 0.0;
    for (i, &[x, y, z]) in pts.iter().enumerate() {
        let covered = stair.range(..=Key(x)).next_back().is_some_and(|(_, &py)| py <= y);
        if !covered {
            let mut level = stair.range(..Key(x)).next_back().map_or(ry, |(_, &py)| py);
            let mut cur = x;
            let mut removed = Vec::new();
            let mut open = true;
            for (&Key(sx), &sy) in stair.range(Key(x)..) {
                area += (sx - cur) * (level - y);
                if sy >= y {
                    removed.push(Key(sx));
                    level = sy;
                    cur = sx;
                } else {
                    open = false;
                    break;
                }
            }
            if open {
                area += (rx - cur) * (level - y);
            }
            for k in removed {
                stair.remove(&k);
            }
            stair.insert(Key(x), y);
        }
        let next_z = pts.get(i + 1).map_or(rz, |p| p[2]);
        volume += area * (next_z - z);
    }
    volume
}
