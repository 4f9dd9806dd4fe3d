use crate::objectives::ObjectiveVector;

/// 1-based Pareto ranks via fast non-dominated sorting.
pub fn non_dominated_sort(objectives: &[ObjectiveVector]) -> Vec<usize> {
    let n = objectives.len();
    let mut dominated_by = vec![0usize; n];
    let mut dominates: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if objectives[i].dominates(&objectives[j]) {
                dominates[i].push(j);
                dominated_by[j] += 1;
            } else if objectives[j].dominates(&objectives[i]) {
                dominates[j].push(i);
                dominated_by[i] += 1;
            }
        }
    }
    let mut ranks = vec![0; n];
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by[i] == 0).collect();
    let mut rank = 1;
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            ranks[i] = rank;
            for &j in &dominates[i] {
                dominated_by[j] -= 1;
                if dominated_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        current = next;
        rank += 1;
    }
    ranks
}

/// Crowding distance of each member of one front (indices into `objectives`).
pub fn crowding_distance(objectives: &[ObjectiveVector], front: &[usize]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    for m in 0..3 {
        let val = |k: usize| objectives[front[k]].as_array()[m];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| val(a).total_cmp(&val(b)).then(a.cmp(&b)));
        let (lo, hi) = (val(order[0]), val(order[n - 1]));
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        if hi > lo {
            for w in 1..n - 1 {
                dist[order[w]] += (val(order[w + 1]) - val(order[w - 1])) / (hi - lo);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: f64, b: f64, c: f64) -> ObjectiveVector {
        ObjectiveVector::from_array([a, b, c])
    }

    #[test]
    fn small_examples() {
        assert_eq!(non_dominated_sort(&[v(1.0, 1.0, 1.0), v(2.0, 2.0, 2.0)]), vec![1, 2]);
        assert_eq!(non_dominated_sort(&[v(1.0, 2.0, 0.0), v(2.0, 1.0, 0.0)]), vec![1, 1]);
        assert_eq!(non_dominated_sort(&[v(1.0, 1.0, 1.0), v(1.0, 1.0, 1.0)]), vec![1, 1]);
    }

    #[test]
    fn crowding_boundaries_are_infinite() {
        let objs = [v(0.0, 3.0, 0.0), v(1.0, 2.0, 0.0), v(3.0, 0.0, 0.0)];
        let d = crowding_distance(&objs, &[0, 1, 2]);
        assert!(d[0].is_infinite() && d[2].is_infinite());
        assert!((d[1] - 2.0).abs() < 1e-12);
    }
}
