//! Exact feasibility machinery over affine constraints.
//!
//! Every window used by the co-operation constructions is a set of strict
//! affine inequalities in one to three parameters. With rational scalars the
//! vertex enumeration below is exact, so an empty window is a real answer and
//! not a rounding artifact.

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{NumericConfig, Scalar};

/// `coeffs · x + constant`.
#[derive(Clone, Debug, PartialEq)]
pub struct Affine<S> {
    pub coeffs: Vec<S>,
    pub constant: S,
}

impl<S: Scalar> Affine<S> {
    pub fn constant(value: S, dims: usize) -> Self {
        Affine {
            coeffs: vec![S::zero(); dims],
            constant: value,
        }
    }

    /// The coordinate `x[index]`.
    pub fn var(index: usize, dims: usize) -> Self {
        let mut coeffs = vec![S::zero(); dims];
        coeffs[index] = S::one();
        Affine {
            coeffs,
            constant: S::zero(),
        }
    }

    pub fn dims(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, x: &[S]) -> S {
        self.coeffs
            .iter()
            .zip(x)
            .fold(self.constant.clone(), |acc, (c, v)| acc + c.clone() * v.clone())
    }

    pub fn scale(&self, k: &S) -> Self {
        Affine {
            coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect(),
            constant: self.constant.clone() * k.clone(),
        }
    }

    /// Constraint `self > rhs`.
    pub fn gt(&self, rhs: &Affine<S>) -> Halfspace<S> {
        Halfspace(self.clone() - rhs.clone())
    }

    /// Constraint `self < rhs`.
    pub fn lt(&self, rhs: &Affine<S>) -> Halfspace<S> {
        Halfspace(rhs.clone() - self.clone())
    }

    pub fn gt_const(&self, rhs: S) -> Halfspace<S> {
        self.gt(&Affine::constant(rhs, self.dims()))
    }

    pub fn lt_const(&self, rhs: S) -> Halfspace<S> {
        self.lt(&Affine::constant(rhs, self.dims()))
    }
}

impl<S: Scalar> Add for Affine<S> {
    type Output = Affine<S>;

    fn add(self, rhs: Affine<S>) -> Affine<S> {
        Affine {
            coeffs: self.coeffs.into_iter().zip(rhs.coeffs).map(|(a, b)| a + b).collect(),
            constant: self.constant + rhs.constant,
        }
    }
}

impl<S: Scalar> Sub for Affine<S> {
    type Output = Affine<S>;

    fn sub(self, rhs: Affine<S>) -> Affine<S> {
        self + (-rhs)
    }
}

impl<S: Scalar> Neg for Affine<S> {
    type Output = Affine<S>;

    fn neg(self) -> Affine<S> {
        Affine {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
            constant: -self.constant,
        }
    }
}

impl<S: Scalar> Mul<S> for Affine<S> {
    type Output = Affine<S>;

    fn mul(self, k: S) -> Affine<S> {
        self.scale(&k)
    }
}

impl<S: Scalar> Add<S> for Affine<S> {
    type Output = Affine<S>;

    fn add(mut self, k: S) -> Affine<S> {
        self.constant = self.constant + k;
        self
    }
}

/// Strict inequality `expr > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace<S>(pub Affine<S>);

impl<S: Scalar> Halfspace<S> {
    pub fn holds_strictly(&self, x: &[S], cfg: &NumericConfig) -> bool {
        cfg.is_positive(&self.0.eval(x))
    }

    pub fn holds_weakly(&self, x: &[S], cfg: &NumericConfig) -> bool {
        cfg.ge(&self.0.eval(x), &S::zero())
    }
}

/// A strictly interior point of `{x : h(x) > 0 for all h} ∩ box`, or `None`.
///
/// Computes the distinct vertices of the closed polytope and returns their
/// centroid. The centroid puts positive weight on every vertex, so it lies in
/// the relative interior; it is accepted only if it satisfies every
/// inequality strictly, which fails exactly when the polytope has no
/// interior. For a 1-D window this is the interval midpoint.
///
/// Polygons are clipped edge by edge; higher dimensions enumerate every
/// choice of `n` tight constraints.
pub fn feasible_point<S: Scalar>(
    constraints: &[Halfspace<S>],
    bounds: &[(S, S)],
    cfg: &NumericConfig,
) -> Option<Vec<S>> {
    let n = bounds.len();
    if n == 0 || constraints.iter().any(|h| h.0.dims() != n) {
        return None;
    }
    let mut all: Vec<Halfspace<S>> = constraints.to_vec();
    for (i, (lo, hi)) in bounds.iter().enumerate() {
        let x = Affine::var(i, n);
        all.push(x.gt_const(lo.clone()));
        all.push(x.lt_const(hi.clone()));
    }

    let vertices = match n {
        1 => interval_vertices(&all, bounds, cfg)?,
        2 => polygon_vertices(&all, bounds, cfg)?,
        _ => enumerate_vertices(&all, n, cfg),
    };
    if vertices.is_empty() {
        return None;
    }
    let k = S::from_usize(vertices.len());
    let centroid: Vec<S> = (0..n)
        .map(|i| vertices.iter().fold(S::zero(), |acc, v| acc + v[i].clone()) / k.clone())
        .collect();
    all.iter()
        .all(|h| h.holds_strictly(&centroid, cfg))
        .then_some(centroid)
}

fn push_distinct<S: Scalar>(out: &mut Vec<Vec<S>>, v: Vec<S>, cfg: &NumericConfig) {
    if !out.iter().any(|w| w.iter().zip(&v).all(|(a, b)| cfg.eq(a, b))) {
        out.push(v);
    }
}

fn interval_vertices<S: Scalar>(all: &[Halfspace<S>], bounds: &[(S, S)], cfg: &NumericConfig) -> Option<Vec<Vec<S>>> {
    let (mut lo, mut hi) = bounds[0].clone();
    for h in all {
        let (a, c) = (&h.0.coeffs[0], &h.0.constant);
        if a.is_zero() {
            if cfg.lt(c, &S::zero()) {
                return None;
            }
            continue;
        }
        let root = -c.clone() / a.clone();
        if a.is_positive() {
            lo = S::max_of(lo, root);
        } else {
            hi = S::min_of(hi, root);
        }
    }
    if cfg.gt(&lo, &hi) {
        return None;
    }
    let mut out = vec![vec![lo]];
    push_distinct(&mut out, vec![hi], cfg);
    Some(out)
}

/// Sutherland-Hodgman clipping of the bounding box by each closed halfplane.
fn polygon_vertices<S: Scalar>(all: &[Halfspace<S>], bounds: &[(S, S)], cfg: &NumericConfig) -> Option<Vec<Vec<S>>> {
    let ((x0, x1), (y0, y1)) = (bounds[0].clone(), bounds[1].clone());
    let mut poly = vec![
        vec![x0.clone(), y0.clone()],
        vec![x1.clone(), y0],
        vec![x1, y1.clone()],
        vec![x0, y1],
    ];
    let zero = S::zero();
    for h in all {
        let values: Vec<S> = poly.iter().map(|p| h.0.eval(p)).collect();
        if values.iter().all(|v| cfg.ge(v, &zero)) {
            continue;
        }
        let mut next = Vec::with_capacity(poly.len() + 1);
        for i in 0..poly.len() {
            let j = (i + 1) % poly.len();
            let (vp, vq) = (&values[i], &values[j]);
            let keep_p = cfg.ge(vp, &zero);
            if keep_p {
                push_distinct(&mut next, poly[i].clone(), cfg);
            }
            if (cfg.gt(vp, &zero) && cfg.lt(vq, &zero)) || (cfg.lt(vp, &zero) && cfg.gt(vq, &zero)) {
                let t = vp.clone() / (vp.clone() - vq.clone());
                let cut = poly[i]
                    .iter()
                    .zip(&poly[j])
                    .map(|(p, q)| p.clone() + (q.clone() - p.clone()) * t.clone())
                    .collect();
                push_distinct(&mut next, cut, cfg);
            }
        }
        if next.is_empty() {
            return None;
        }
        poly = next;
    }
    Some(poly)
}

fn enumerate_vertices<S: Scalar>(all: &[Halfspace<S>], n: usize, cfg: &NumericConfig) -> Vec<Vec<S>> {
    let mut out = Vec::new();
    for_each_combination(all.len(), n, |idx| {
        let rows: Vec<Vec<S>> = idx.iter().map(|&i| all[i].0.coeffs.clone()).collect();
        let rhs: Vec<S> = idx.iter().map(|&i| -all[i].0.constant.clone()).collect();
        if let Some(v) = solve(rows, rhs) {
            if all.iter().all(|h| h.holds_weakly(&v, cfg)) {
                push_distinct(&mut out, v, cfg);
            }
        }
    });
    out
}

fn for_each_combination(m: usize, n: usize, mut f: impl FnMut(&[usize])) {
    if n > m {
        return;
    }
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        f(&idx);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + m - n {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..n {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Gaussian elimination; `None` when the system is singular.
pub(crate) fn solve<S: Scalar>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Option<Vec<S>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        let p = a[pivot][col].abs();
        if p.is_zero() || (!S::EXACT && p.to_f64() < 1e-14) {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col].clone() / a[col][col].clone();
            if factor.is_zero() {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row);
            for (target, source) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *target = target.clone() - source.clone() * factor.clone();
            }
            b[row] = b[row].clone() - b[col].clone() * factor;
        }
    }
    let mut x = vec![S::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..n {
            acc = acc - a[row][k].clone() * x[k].clone();
        }
        x[row] = acc / a[row][row].clone();
    }
    Some(x)
}

/// `c0 + c1 * t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Linear<S> {
    pub c0: S,
    pub c1: S,
}

impl<S: Scalar> Linear<S> {
    pub fn new(c0: S, c1: S) -> Self {
        Linear { c0, c1 }
    }

    pub fn at(&self, t: &S) -> S {
        self.c0.clone() + self.c1.clone() * t.clone()
    }

    /// Root of `self - other`, if the two lines are not parallel.
    fn crossing(&self, other: &Linear<S>) -> Option<S> {
        let slope = self.c1.clone() - other.c1.clone();
        (!slope.is_zero()).then(|| (other.c0.clone() - self.c0.clone()) / slope)
    }
}

/// Open sub-intervals of `(lo, hi)` on which the sorted `source(t)` is
/// majorized by the sorted `target(t)`, every entry being affine in `t`.
///
/// Between consecutive crossing points of the entries both sort orders are
/// fixed, so each prefix-sum gap is affine there and changes sign at most
/// once; splitting at those roots leaves pieces on which the verdict is
/// constant, decided by testing the piece midpoint.
pub fn majorization_windows<S: Scalar>(
    source: &[Linear<S>],
    target: &[Linear<S>],
    lo: &S,
    hi: &S,
    cfg: &NumericConfig,
) -> Vec<(S, S)> {
    if lo >= hi {
        return Vec::new();
    }
    let inside = |t: &S| t > lo && t < hi;
    let mut cuts = vec![lo.clone(), hi.clone()];
    for side in [source, target] {
        for i in 0..side.len() {
            for j in i + 1..side.len() {
                if let Some(t) = side[i].crossing(&side[j]) {
                    if inside(&t) {
                        cuts.push(t);
                    }
                }
            }
        }
    }
    sort_dedup(&mut cuts);

    let mut points = cuts.clone();
    for w in cuts.windows(2) {
        let mid = midpoint(&w[0], &w[1]);
        let s = sorted_prefix_lines(source, &mid);
        let t = sorted_prefix_lines(target, &mid);
        let n = s.len().max(t.len());
        let zero = Linear::new(S::zero(), S::zero());
        for k in 0..n {
            let sk = s.get(k).or(s.last()).unwrap_or(&zero);
            let tk = t.get(k).or(t.last()).unwrap_or(&zero);
            if let Some(r) = sk.crossing(tk) {
                if r > w[0] && r < w[1] {
                    points.push(r);
                }
            }
        }
    }
    sort_dedup(&mut points);

    let mut windows: Vec<(S, S)> = Vec::new();
    for w in points.windows(2) {
        let mid = midpoint(&w[0], &w[1]);
        if majorized_at(source, target, &mid, cfg) {
            match windows.last_mut() {
                Some(last) if last.1 == w[0] => last.1 = w[1].clone(),
                _ => windows.push((w[0].clone(), w[1].clone())),
            }
        }
    }
    windows
}

fn sorted_prefix_lines<S: Scalar>(entries: &[Linear<S>], t: &S) -> Vec<Linear<S>> {
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&i, &j| {
        entries[j]
            .at(t)
            .partial_cmp(&entries[i].at(t))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut acc = Linear::new(S::zero(), S::zero());
    order
        .into_iter()
        .map(|i| {
            acc = Linear::new(acc.c0.clone() + entries[i].c0.clone(), acc.c1.clone() + entries[i].c1.clone());
            acc.clone()
        })
        .collect()
}

fn majorized_at<S: Scalar>(source: &[Linear<S>], target: &[Linear<S>], t: &S, cfg: &NumericConfig) -> bool {
    let mut xs: Vec<S> = source.iter().map(|l| l.at(t)).collect();
    let mut ys: Vec<S> = target.iter().map(|l| l.at(t)).collect();
    crate::state::sort_desc(&mut xs);
    crate::state::sort_desc(&mut ys);
    let n = xs.len().max(ys.len());
    let (mut sx, mut sy) = (S::zero(), S::zero());
    for k in 0..n {
        sx = sx + xs.get(k).cloned().unwrap_or_else(S::zero);
        sy = sy + ys.get(k).cloned().unwrap_or_else(S::zero);
        if cfg.gt(&sx, &sy) {
            return false;
        }
    }
    true
}

pub(crate) fn midpoint<S: Scalar>(a: &S, b: &S) -> S {
    (a.clone() + b.clone()) * S::half()
}

fn sort_dedup<S: Scalar>(xs: &mut Vec<S>) {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    xs.dedup();
}

/// Down-sets of the `rows × cols` grid under the coordinatewise order, each
/// given as nonincreasing row lengths.
///
/// For descending nonnegative `u`, `v`, the `k` largest products `u_i v_j`
/// always form a down-set of size `k`, so bounding every down-set sum bounds
/// the top-`k` sum.
pub fn order_ideals(rows: usize, cols: usize) -> Vec<Vec<usize>> {
    fn extend(rows: usize, cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == rows {
            out.push(prefix.clone());
            return;
        }
        for len in (0..=cap).rev() {
            prefix.push(len);
            extend(rows, len, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(rows, cols, &mut Vec::with_capacity(rows), &mut out);
    out
}

/// Constraints `top_k(left ⊗ right) < target_prefix[k-1]` for every proper
/// prefix, where `left` is fixed and descending and `right` is affine in the
/// parameters and constrained descending elsewhere.
pub fn tensor_prefix_constraints<S: Scalar>(
    left: &[S],
    right: &[Affine<S>],
    target_prefix: &[S],
) -> Vec<Halfspace<S>> {
    let total = left.len() * right.len();
    let dims = right.first().map_or(0, Affine::dims);
    let mut out = Vec::new();
    for ideal in order_ideals(left.len(), right.len()) {
        let k: usize = ideal.iter().sum();
        if k == 0 || k >= total {
            continue;
        }
        let mut expr = Affine::constant(S::zero(), dims);
        for (i, &len) in ideal.iter().enumerate() {
            for r in &right[..len] {
                expr = expr + r.scale(&left[i]);
            }
        }
        let bound = target_prefix.get(k - 1).cloned().unwrap_or_else(S::one);
        out.push(expr.lt_const(bound));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    const CFG: NumericConfig = NumericConfig {
        mode: crate::scalar::Mode::Exact,
        eps: crate::scalar::DEFAULT_EPS,
        tensor_cap: crate::scalar::DEFAULT_TENSOR_CAP,
    };

    #[test]
    fn interval_midpoint() {
        let x = Affine::<Rational>::var(0, 1);
        let cons = vec![x.gt_const(q(2, 10)), x.lt_const(q(225, 1000))];
        let p = feasible_point(&cons, &[(q(0, 1), q(1, 1))], &CFG).unwrap();
        assert_eq!(p, vec![q(2125, 10000)]);
    }

    #[test]
    fn empty_interval() {
        let x = Affine::<Rational>::var(0, 1);
        let cons = vec![x.gt_const(q(1, 1)), x.lt_const(q(0, 1))];
        assert_eq!(feasible_point(&cons, &[(q(-5, 1), q(5, 1))], &CFG), None);
    }

    #[test]
    fn degenerate_polytope_has_no_interior_point() {
        // x > y and x < y leaves only a segment of measure zero after closure
        let x = Affine::<Rational>::var(0, 2);
        let y = Affine::<Rational>::var(1, 2);
        let cons = vec![x.gt(&y), x.lt(&y)];
        let unit = (q(0, 1), q(1, 1));
        assert_eq!(feasible_point(&cons, &[unit.clone(), unit], &CFG), None);
    }

    #[test]
    fn triangle_centroid_is_interior() {
        let x = Affine::<Rational>::var(0, 2);
        let y = Affine::<Rational>::var(1, 2);
        let cons = vec![(x.clone() + y.clone()).lt_const(q(1, 1)), x.gt_const(q(0, 1)), y.gt_const(q(0, 1))];
        let p = feasible_point(&cons, &[(q(-1, 1), q(2, 1)), (q(-1, 1), q(2, 1))], &CFG).unwrap();
        assert_eq!(p, vec![q(1, 3), q(1, 3)]);
    }

    #[test]
    fn clipping_matches_vertex_enumeration() {
        use rand::Rng;
        let mut rng = crate::sampling::rng(9);
        let unit = (q(0, 1), q(1, 1));
        for _ in 0..200 {
            let cons: Vec<Halfspace<Rational>> = (0..6)
                .map(|_| {
                    let mut r = || q(rng.gen_range(-20..=20), 10);
                    Halfspace(Affine {
                        coeffs: vec![r(), r()],
                        constant: r(),
                    })
                })
                .collect();
            let mut all = cons.clone();
            for i in 0..2 {
                all.push(Affine::var(i, 2).gt_const(q(0, 1)));
                all.push(Affine::var(i, 2).lt_const(q(1, 1)));
            }
            let clipped = polygon_vertices(&all, &[unit.clone(), unit.clone()], &CFG).unwrap_or_default();
            let enumerated = enumerate_vertices(&all, 2, &CFG);
            assert_eq!(clipped.len(), enumerated.len(), "{cons:?}");
            assert!(clipped.iter().all(|v| enumerated.contains(v)));
        }
    }

    #[test]
    fn solver_handles_pivoting() {
        let a = vec![vec![q(0, 1), q(1, 1)], vec![q(2, 1), q(1, 1)]];
        assert_eq!(solve(a, vec![q(3, 1), q(5, 1)]), Some(vec![q(1, 1), q(3, 1)]));
        let singular = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
        assert_eq!(solve(singular, vec![q(1, 1), q(2, 1)]), None);
    }

    #[test]
    fn ideal_count_is_binomial() {
        // down-sets of an m×n grid are lattice paths: C(m+n, m)
        assert_eq!(order_ideals(3, 3).len(), 20);
        assert_eq!(order_ideals(2, 3).len(), 10);
        assert_eq!(order_ideals(1, 4).len(), 5);
    }

    #[test]
    fn windows_for_simple_crossing() {
        // source (1/2, 1/2) vs target (t, 1 - t) on (1/4, 1): majorized iff t >= 1/2
        let source = vec![Linear::new(q(1, 2), q(0, 1)), Linear::new(q(1, 2), q(0, 1))];
        let target = vec![Linear::new(q(0, 1), q(1, 1)), Linear::new(q(1, 1), q(-1, 1))];
        let w = majorization_windows(&source, &target, &q(1, 4), &q(1, 1), &CFG);
        // t <= 1/2 also works because the target re-sorts to (1-t, t)
        assert_eq!(w, vec![(q(1, 4), q(1, 1))]);

        // source (3/5, 2/5) vs target (t, 1 - t): needs max(t, 1-t) >= 3/5
        let source = vec![Linear::new(q(3, 5), q(0, 1)), Linear::new(q(2, 5), q(0, 1))];
        let w = majorization_windows(&source, &target, &q(0, 1), &q(1, 1), &CFG);
        assert_eq!(w, vec![(q(0, 1), q(2, 5)), (q(3, 5), q(1, 1))]);
    }
}
