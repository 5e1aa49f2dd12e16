#![allow(dead_code)]

/// Exact integer determinant by permutation expansion.
pub fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0i128;
    permute(&mut perm, 0, m, &mut total);
    total
}

fn permute(p: &mut Vec<usize>, k: usize, m: &[Vec<i128>], total: &mut i128) {
    if k == p.len() {
        let mut inversions = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        let prod: i128 = (0..p.len()).map(|i| m[i][p[i]]).product();
        *total += if inversions % 2 == 0 { prod } else { -prod };
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, m, total);
        p.swap(k, i);
    }
}

fn drop_row_col(m: &[Vec<i128>], r: usize, c: usize) -> Vec<Vec<i128>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != r)
        .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| *v).collect())
        .collect()
}

fn pick(m: &[Vec<i128>], rows: &[usize], cols: &[usize]) -> Vec<Vec<i128>> {
    rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect()
}

/// Minor of the integer cofactor matrix at `(rows, cols)` and the signed,
/// scaled complementary minor, both in exact arithmetic.
pub fn jacobi_oracle(m: &[Vec<i128>], rows: &[usize], cols: &[usize]) -> (i128, i128) {
    let n = m.len();
    let cof: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = det_i128(&drop_row_col(m, i, j));
                    if (i + j) % 2 == 0 {
                        d
                    } else {
                        -d
                    }
                })
                .collect()
        })
        .collect();
    let lhs = det_i128(&pick(&cof, rows, cols));
    let rest = |idx: &[usize]| (0..n).filter(|i| !idx.contains(i)).collect::<Vec<_>>();
    let comp = det_i128(&pick(m, &rest(rows), &rest(cols)));
    let sign = if (rows.iter().sum::<usize>() + cols.iter().sum::<usize>()) % 2 == 0 { 1 } else { -1 };
    let r = rows.len() as u32;
    (lhs, det_i128(m).pow(r - 1) * sign * comp)
}

/// Derivatives 1..=3 of `f` at `x` by central differences with one
/// Richardson step.
pub fn fd_derivatives(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> [f64; 3] {
    let d = |h: f64| {
        [
            (f(x + h) - f(x - h)) / (2.0 * h),
            (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
            (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h),
        ]
    };
    let (a, b) = (d(h), d(h / 2.0));
    [(4.0 * b[0] - a[0]) / 3.0, (4.0 * b[1] - a[1]) / 3.0, (4.0 * b[2] - a[2]) / 3.0]
}
