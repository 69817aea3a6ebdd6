//! Packed monomial keys.
//!
//! A monomial in up to twelve variables is stored in a `u128`: the top 32 bits
//! hold the total degree and each variable gets one byte below that, variable 0
//! in the most significant byte. Integer order on the key is then graded
//! lexicographic order with variable 0 largest, and multiplying monomials is
//! plain addition of keys as long as no exponent passes 255.

pub const MAX_VARS: usize = 12;
pub const MAX_EXP: u32 = 255;

const DEG_SHIFT: u32 = 96;

#[inline]
fn shift(i: usize) -> u32 {
    88 - 8 * i as u32
}

pub type Key = u128;

pub fn pack(exps: &[u32]) -> Key {
    debug_assert!(exps.len() <= MAX_VARS);
    let mut key: u128 = 0;
    let mut deg: u128 = 0;
    for (i, &e) in exps.iter().enumerate() {
        assert!(e <= MAX_EXP, "exponent {e} exceeds {MAX_EXP}");
        key |= (e as u128) << shift(i);
        deg += e as u128;
    }
    key | (deg << DEG_SHIFT)
}

#[inline]
pub fn exponent(key: Key, i: usize) -> u32 {
    ((key >> shift(i)) & 0xff) as u32
}

#[inline]
pub fn degree(key: Key) -> u32 {
    (key >> DEG_SHIFT) as u32
}

pub fn unpack(key: Key, nvars: usize) -> Vec<u32> {
    (0..nvars).map(|i| exponent(key, i)).collect()
}

/// Largest single exponent appearing in the key.
pub fn max_exponent(key: Key, nvars: usize) -> u32 {
    (0..nvars).map(|i| exponent(key, i)).max().unwrap_or(0)
}

/// Key with variable `i` removed (exponent set to zero).
pub fn without(key: Key, i: usize) -> Key {
    let e = exponent(key, i) as u128;
    key - (e << shift(i)) - (e << DEG_SHIFT)
}

/// Key of the pure power `x_i^e`.
pub fn var_power(i: usize, e: u32) -> Key {
    assert!(e <= MAX_EXP, "exponent {e} exceeds {MAX_EXP}");
    ((e as u128) << shift(i)) | ((e as u128) << DEG_SHIFT)
}

/// Divides monomials; `None` if `den` does not divide `num`.
pub fn divide(num: Key, den: Key, nvars: usize) -> Option<Key> {
    for i in 0..nvars {
        if exponent(den, i) > exponent(num, i) {
            return None;
        }
    }
    Some(num - den)
}
