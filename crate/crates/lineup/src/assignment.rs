//! Exact linear assignment on small dense tables.
//!
//! Augmenting-path Hungarian method on a square table, with rectangular
//! inputs (rows <= cols) padded by zero-weight dummy rows. A lexicographic
//! refinement pass fixes rows in order to the smallest column index that
//! still completes to an optimal assignment, so ties resolve
//! deterministically and match the brute-force oracle's convention.

/// Dense row-major weight table; rows are positions, columns candidates.
#[derive(Debug, Clone)]
pub(crate) struct WeightTable {
    rows: usize,
    cols: usize,
    w: Vec<f64>,
}

impl WeightTable {
    pub(crate) fn new(rows: usize, cols: usize, w: Vec<f64>) -> Self {
        assert_eq!(w.len(), rows * cols);
        assert!(rows <= cols, "assignment needs rows <= cols");
        Self { rows, cols, w }
    }

    pub(crate) fn rows(&self) -> usize {
        self.rows
    }

    pub(crate) fn cols(&self) -> usize {
        self.cols
    }

    pub(crate) fn get(&self, r: usize, c: usize) -> f64 {
        self.w[r * self.cols + c]
    }

    /// Plain sum of the table weights along `assignment`, rows ascending.
    pub(crate) fn total(&self, assignment: &[usize]) -> f64 {
        assignment
            .iter()
            .enumerate()
            .map(|(r, &c)| self.get(r, c))
            .sum()
    }
}

/// Classic O(n^3) shortest-augmenting-path Hungarian on an n x n cost
/// function; returns the column assigned to each row.
fn hungarian_square(n: usize, cost: &dyn Fn(usize, usize) -> f64) -> Vec<usize> {
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of_col = vec![0usize; n + 1]; // 1-based rows; 0 = unassigned
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of_col[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of_col[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of_col[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if row_of_col[j] != 0 {
            assignment[row_of_col[j] - 1] = j - 1;
        }
    }
    assignment
}

/// Optimal completion of `table` once columns in `used` are taken and only
/// rows `first_row..` remain; dummy zero-weight rows pad the square.
fn complete(table: &WeightTable, first_row: usize, used: &[bool]) -> Vec<usize> {
    let free_cols: Vec<usize> = (0..table.cols()).filter(|&c| !used[c]).collect();
    let real_rows = table.rows() - first_row;
    let n = free_cols.len();
    debug_assert!(real_rows <= n);
    let cost = |r: usize, c: usize| {
        if r < real_rows {
            table.get(first_row + r, free_cols[c])
        } else {
            0.0
        }
    };
    let square = hungarian_square(n, &cost);
    square[..real_rows]
        .iter()
        .map(|&c| free_cols[c])
        .collect()
}

/// Minimum-cost injective assignment of every row to a column, returning
/// the lexicographically smallest optimal assignment array.
pub(crate) fn lex_min_assignment(table: &WeightTable) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::with_capacity(table.rows());
    let mut used = vec![false; table.cols()];
    let mut prefix = 0.0;
    for r in 0..table.rows() {
        let mut best_col = usize::MAX;
        let mut best_total = f64::INFINITY;
        for c in 0..table.cols() {
            if used[c] {
                continue;
            }
            used[c] = true;
            let tail = complete(table, r + 1, &used);
            used[c] = false;
            let mut total = prefix + table.get(r, c);
            for (offset, &tc) in tail.iter().enumerate() {
                total += table.get(r + 1 + offset, tc);
            }
            // Strict less keeps the smallest column on ties.
            if total < best_total {
                best_total = total;
                best_col = c;
            }
        }
        prefix += table.get(r, best_col);
        used[best_col] = true;
        chosen.push(best_col);
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use proptest::prelude::*;

    fn brute_force(table: &WeightTable) -> Vec<usize> {
        let mut best: Option<(f64, Vec<usize>)> = None;
        for perm in (0..table.cols()).permutations(table.rows()) {
            let total = table.total(&perm);
            let better = match &best {
                None => true,
                Some((t, _)) => total < *t,
            };
            if better {
                best = Some((total, perm));
            }
        }
        best.unwrap().1
    }

    #[test]
    fn single_column_table() {
        let table = WeightTable::new(1, 1, vec![3.0]);
        assert_eq!(lex_min_assignment(&table), vec![0]);
    }

    #[test]
    fn tie_resolves_lexicographically() {
        let table = WeightTable::new(2, 3, vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(lex_min_assignment(&table), vec![0, 1]);
    }

    #[test]
    fn simple_square() {
        let table = WeightTable::new(2, 2, vec![4.0, 1.0, 2.0, 3.0]);
        assert_eq!(lex_min_assignment(&table), vec![1, 0]);
    }

    proptest! {
        #[test]
        fn matches_enumeration_oracle(
            rows in 1usize..=3,
            extra in 0usize..=2,
            seed in proptest::collection::vec(0u32..1000, 15),
        ) {
            let cols = rows + extra;
            // Dyadic weights are exact in f64, so ties are exact and the
            // lexicographic conventions of both sides must agree.
            let w: Vec<f64> = seed
                .iter()
                .cycle()
                .take(rows * cols)
                .map(|&x| x as f64 / 16.0)
                .collect();
            let table = WeightTable::new(rows, cols, w);
            let lex = lex_min_assignment(&table);
            let brute = brute_force(&table);
            prop_assert_eq!(table.total(&lex), table.total(&brute));
            prop_assert_eq!(lex, brute);
        }
    }
}
