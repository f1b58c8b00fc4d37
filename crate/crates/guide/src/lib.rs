//! Doc-test harness for the book. Each chapter is included as the doc
//! comment of an empty module, so `cargo test -p posetmep-guide` runs
//! every `rust` block in it.

macro_rules! chapter {
    ($name:ident, $file:literal) => {
        #[doc = include_str!(concat!("../../../book/src/", $file))]
        #[cfg(doctest)]
        pub mod $name {}
    };
}

chapter!(introduction, "introduction.md");
chapter!(posets, "posets.md");
chapter!(spaces, "spaces.md");
chapter!(isometries, "isometries.md");
chapter!(extension, "extension.md");
chapter!(lattices, "lattices.md");
chapter!(fourier, "fourier.md");
chapter!(cli, "cli.md");
