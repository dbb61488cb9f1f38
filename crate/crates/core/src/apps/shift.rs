use crate::polymat::Shift;

/// A shift with `min = 0` and consecutive sorted gaps capped at `sigma`.
///
/// Any s-Popov matrix whose diagonal degrees are below `sigma` is also in
/// Popov form for the returned shift.
pub fn reduce_shift(s: &Shift, sigma: usize) -> Shift {
    let e = s.entries();
    let mut order: Vec<usize> = (0..e.len()).collect();
    order.sort_by_key(|&i| e[i]);
    let cap = sigma as i64;
    let mut out = vec![0i64; e.len()];
    for w in order.windows(2) {
        out[w[1]] = out[w[0]] + (e[w[1]] - e[w[0]]).min(cap);
    }
    Shift::new(out)
}
