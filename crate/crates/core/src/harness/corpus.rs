//! Scripts shipped with the crate.

use crate::dsl::ImportResolver;

/// Derived operators: relative distances and similarity indexes.
pub const STDLIB: &str = include_str!("../../corpus/stdlib.imgql");
/// The nevus segmentation specification with result saving and scoring.
pub const NEVUS_V0: &str = include_str!("../../corpus/nevus_v0.imgql");

pub const FILES: &[(&str, &str)] = &[("stdlib.imgql", STDLIB), ("nevus_v0.imgql", NEVUS_V0)];

pub fn get(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Adds the embedded files as the last import fallback.
pub fn register(mut resolver: ImportResolver) -> ImportResolver {
    for (name, text) in FILES {
        resolver = resolver.with_embedded(*name, *text);
    }
    resolver
}
