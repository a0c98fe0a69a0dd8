//! Parameter tables for every subcommand. Both the clap front end and the
//! config-file loader are driven from these.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Int,
    Real,
    Bool,
    Path,
    Text,
    Choice(&'static [&'static str]),
}

#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub key: &'static str,
    pub kind: Kind,
    pub help: &'static str,
    pub default: Option<&'static str>,
    pub required: bool,
    pub positional: bool,
}

impl ParamSpec {
    /// Long flag name: underscores become dashes.
    pub fn flag(&self) -> String {
        self.key.replace('_', "-")
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CommandSpec {
    pub name: &'static str,
    pub about: &'static str,
    pub params: &'static [ParamSpec],
}

impl CommandSpec {
    pub fn param(&self, key: &str) -> Option<&ParamSpec> {
        self.params.iter().find(|p| p.key == key)
    }
}

const fn opt(key: &'static str, kind: Kind, help: &'static str) -> ParamSpec {
    ParamSpec { key, kind, help, default: None, required: false, positional: false }
}

const fn req(key: &'static str, kind: Kind, help: &'static str) -> ParamSpec {
    ParamSpec { required: true, ..opt(key, kind, help) }
}

const fn def(key: &'static str, kind: Kind, default: &'static str, help: &'static str) -> ParamSpec {
    ParamSpec { default: Some(default), ..opt(key, kind, help) }
}

const fn pos(spec: ParamSpec) -> ParamSpec {
    ParamSpec { positional: true, ..spec }
}

pub const ORDERS: &[&str] = &["balanced", "plus-first", "minus-first", "seeded"];
pub const CONSTRUCTIONS: &[&str] = &["bcc", "character", "random", "multiplicative"];
pub const CERTIFY_ACTIONS: &[&str] = &["verify", "sdp", "lp", "vector"];
pub const FAMILIES: &[&str] = &["all-pairs", "diagonal"];

pub static COMMANDS: &[CommandSpec] = &[
    CommandSpec {
        name: "discrepancy",
        about: "HAP discrepancy report of a sequence file",
        params: &[req("input", Kind::Path, "sequence file, one entry from {-1, 0, 1} per line")],
    },
    CommandSpec {
        name: "construct",
        about: "Generate a structured or random sequence",
        params: &[
            req("kind", Kind::Choice(CONSTRUCTIONS), "which construction"),
            opt("n", Kind::Int, "length (defaults to the spec horizon for multiplicative)"),
            opt("spec", Kind::Path, "multiplicative spec file (TOML)"),
            opt("output", Kind::Path, "where to write the sequence (default: <output-dir>/sequence.seq)"),
        ],
    },
    CommandSpec {
        name: "search",
        about: "Depth-first search for long sequences of bounded discrepancy",
        params: &[
            req("C", Kind::Int, "discrepancy bound"),
            opt("prove", Kind::Bool, "require the search tree to be exhausted (exit 3 otherwise)"),
            opt("multiplicative", Kind::Bool, "only completely multiplicative sequences"),
            opt("max_length", Kind::Int, "stop once this length is reached"),
            opt("node_budget", Kind::Int, "total node cap, including resumed nodes"),
            def("order", Kind::Choice(ORDERS), "balanced", "value order at free positions"),
            opt("resume", Kind::Path, "checkpoint file to resume from"),
            def("chunk_nodes", Kind::Int, "1048576", "nodes between progress samples"),
            opt("output", Kind::Path, "witness file (default: <output-dir>/witness.seq)"),
        ],
    },
    CommandSpec {
        name: "certify",
        about: "Verify or search for discrepancy lower-bound certificates",
        params: &[
            pos(req("action", Kind::Choice(CERTIFY_ACTIONS), "verify | sdp | lp | vector")),
            pos(opt("input", Kind::Path, "certificate file for verify")),
            opt("n", Kind::Int, "horizon N"),
            def("family", Kind::Choice(FAMILIES), "all-pairs", "HAP-pair family for lp"),
            opt("dim", Kind::Int, "vector dimension (default N)"),
            opt("iterations", Kind::Int, "iteration cap (sdp, vector)"),
            opt("rho", Kind::Real, "ADMM penalty (sdp)"),
            def("taper", Kind::Int, "0", "objective taper window (sdp)"),
            opt("sweep", Kind::Bool, "also solve every smaller N (sdp)"),
            opt("output", Kind::Path, "certificate file (default: <output-dir>/certificate.json)"),
        ],
    },
    CommandSpec {
        name: "behrend",
        about: "Densest Behrend sphere set inside [1, n]",
        params: &[
            req("n", Kind::Int, "ambient bound"),
            def("compare_seeds", Kind::Int, "0", "random-deletion seeds to compare against"),
            opt("output", Kind::Path, "set file (default: <output-dir>/set.txt)"),
        ],
    },
    CommandSpec {
        name: "capset",
        about: "Product cap sets in F_3^n",
        params: &[
            req("copies", Kind::Int, "number of copies of the base"),
            def("base", Kind::Text, "0,1", "base points as digit strings, comma separated"),
            opt("output", Kind::Path, "cap set file (default: <output-dir>/capset.json)"),
        ],
    },
    CommandSpec {
        name: "count-aps",
        about: "Count k-term progressions in an integer set file",
        params: &[
            req("input", Kind::Path, "integer set file"),
            def("k", Kind::Int, "3", "progression length"),
            opt("five_term", Kind::Bool, "also search x1+...+x5 = 5y"),
        ],
    },
    CommandSpec {
        name: "modular",
        about: "Brute force for HAP sums modulo a prime",
        params: &[
            req("p", Kind::Int, "prime modulus"),
            req("n_max", Kind::Int, "largest length explored"),
            opt("residue", Kind::Int, "report the longest sequence avoiding this residue"),
            opt("node_cap", Kind::Int, "node cap per residue"),
        ],
    },
    CommandSpec {
        name: "plot",
        about: "Write one series of a run as two-column text",
        params: &[
            req("artifact", Kind::Path, "run directory or its result.json"),
            req("series", Kind::Text, "series name"),
            opt("output", Kind::Path, "output file (default: <artifact-dir>/<series>.tsv)"),
        ],
    },
];

pub fn command_spec(name: &str) -> Option<&'static CommandSpec> {
    COMMANDS.iter().find(|c| c.name == name)
}
