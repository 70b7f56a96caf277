//! Bundled benchmark programs: ports of the stack, array queue and linked
//! stack examples. Each is a template over its array size and harness
//! length so the same program can be checked at desk scale or shrunk far
//! enough for exhaustive enumeration.

use crate::frontend::{parse_named, Program};

const STACK: &str = include_str!("../benchmarks/stack.imp.in");
const QUEUE: &str = include_str!("../benchmarks/queue.imp.in");
const STACKLIST: &str = include_str!("../benchmarks/stacklist.imp.in");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Benchmark {
    Stack,
    Queue,
    StackList,
}

impl Benchmark {
    pub const ALL: [Benchmark; 3] = [Benchmark::Stack, Benchmark::Queue, Benchmark::StackList];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Stack => "stack",
            Benchmark::Queue => "queue",
            Benchmark::StackList => "stacklist",
        }
    }

    pub fn file_name(self) -> String {
        format!("{}.imp", self.name())
    }

    /// Capacity and harness length of the bundled `.imp` file.
    pub fn default_params(self) -> (u32, u32) {
        match self {
            Benchmark::Stack => (8, 12),
            Benchmark::Queue => (4, 8),
            Benchmark::StackList => (4, 8),
        }
    }

    /// Source with capacity `size` and a harness loop of `tlen` actions.
    pub fn source(self, size: u32, tlen: u32) -> String {
        match self {
            Benchmark::Stack => STACK.replace("@SIZE@", &size.to_string()),
            Benchmark::Queue => QUEUE.replace("@SIZE@", &size.to_string()),
            // slot 0 of the pool is the null node
            Benchmark::StackList => STACKLIST.replace("@POOL@", &(size + 1).to_string()),
        }
        .replace("@TLEN@", &tlen.to_string())
    }

    pub fn default_source(self) -> String {
        let (size, tlen) = self.default_params();
        self.source(size, tlen)
    }

    pub fn program(self, size: u32, tlen: u32) -> Program {
        parse_named(&self.source(size, tlen), &self.file_name()).expect("bundled benchmark parses")
    }

    pub fn default_program(self) -> Program {
        let (size, tlen) = self.default_params();
        self.program(size, tlen)
    }

    /// The 1-based line of the first source line containing `needle`.
    pub fn line_of(self, needle: &str) -> Option<u32> {
        self.default_source()
            .lines()
            .position(|l| l.contains(needle))
            .map(|i| i as u32 + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{extract_features, validate};

    #[test]
    fn bundled_files_match_templates() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/benchmarks");
        for b in Benchmark::ALL {
            let on_disk = std::fs::read_to_string(format!("{dir}/{}", b.file_name())).unwrap();
            assert_eq!(on_disk, b.default_source(), "{}", b.name());
        }
    }

    #[test]
    fn benchmarks_validate() {
        for b in Benchmark::ALL {
            let p = b.default_program();
            assert!(validate(&p).is_empty(), "{}: {:?}", b.name(), validate(&p));
        }
        let f = extract_features(&Benchmark::Stack.default_program());
        assert_eq!(f.to_vec(), ["pop", "push", "top"]);
    }
}
