use std::fmt::Display;

use serde::Serializer;

/// Serializes a value through its `Display` form, for big numbers.
pub fn ser_display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}
