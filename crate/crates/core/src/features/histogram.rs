use alloc::vec::Vec;

/// Uniform bin of an integer value over `[min, max]`.
///
/// A degenerate range puts everything in bin 0; `max` itself falls in the last bin.
#[inline]
pub fn bin_of_int(value: i64, min: i64, max: i64, bins: usize) -> usize {
    if max <= min {
        return 0;
    }
    let b = ((value - min) as i128 * bins as i128 / (max - min) as i128) as usize;
    b.min(bins - 1)
}

/// Floating-point counterpart of [`bin_of_int`].
#[inline]
pub fn bin_of_f64(value: f64, min: f64, max: f64, bins: usize) -> usize {
    if !(max > min) {
        return 0;
    }
    let b = libm::floor((value - min) / (max - min) * bins as f64);
    if b <= 0.0 {
        0
    } else {
        (b as usize).min(bins - 1)
    }
}

/// L1-normalizes consecutive chunks whose sizes cycle through `pattern`.
/// All-zero chunks stay zero.
pub(crate) fn normalize_chunks(counts: &[u32], pattern: &[usize]) -> Vec<f64> {
    let mut out = Vec::with_capacity(counts.len());
    let mut start = 0;
    let mut k = 0;
    while start < counts.len() {
        let end = start + pattern[k % pattern.len()];
        let chunk = &counts[start..end];
        let total: u64 = chunk.iter().map(|&c| c as u64).sum();
        if total == 0 {
            out.extend(core::iter::repeat_n(0.0, chunk.len()));
        } else {
            out.extend(chunk.iter().map(|&c| c as f64 / total as f64));
        }
        start = end;
        k += 1;
    }
    out
}
