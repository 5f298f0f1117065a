//! Parsing, resolution and checking of whole files in sequence.

use crate::check::{AxiomPolicy, DeclOutcome, Kernel, Options, Status};
use crate::parse::parse;
use crate::resolve::{resolve_each, GlobalScope};
use crate::syntax::{DeclKind, Diagnostic, Term};

/// The outcome of checking one source file.
#[derive(Clone, Debug)]
pub struct FileResult {
    pub file: String,
    pub outcomes: Vec<DeclOutcome>,
}

impl FileResult {
    pub fn all_accepted(&self) -> bool {
        self.outcomes.iter().all(|o| o.status == Status::Accepted)
    }

    pub fn rejected(&self) -> impl Iterator<Item = &DeclOutcome> {
        self.outcomes.iter().filter(|o| o.status != Status::Accepted)
    }
}

/// Files are checked in order against one growing global scope, the way a
/// manifest concatenates them.
pub struct Session {
    scope: GlobalScope,
    kernel: Kernel,
}

impl Session {
    pub fn new(opts: Options, policy: AxiomPolicy) -> Session {
        Session {
            scope: GlobalScope::new(),
            kernel: Kernel::new(opts).with_policy(policy),
        }
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn scope(&self) -> &GlobalScope {
        &self.scope
    }

    /// Checks one file. Parse failures are returned as `Err`; everything
    /// after parsing is reported per declaration.
    pub fn check_source(&mut self, file: &str, source: &str) -> Result<FileResult, Vec<Diagnostic>> {
        let decls = parse(source)?;
        let resolved = resolve_each(&decls, &mut self.scope);
        let mut outcomes = Vec::with_capacity(decls.len());
        for (surface, r) in decls.iter().zip(resolved) {
            match r {
                Ok(core) => outcomes.push(self.kernel.check_decl(&core)),
                Err(diag) => {
                    if surface.kind != DeclKind::Goal {
                        self.kernel.mark_rejected(surface.name.clone());
                    }
                    outcomes.push(DeclOutcome {
                        name: surface.name.clone(),
                        kind: surface.kind,
                        provenance: surface.provenance.clone(),
                        status: Status::Rejected(diag),
                        ms: 0.0,
                    });
                }
            }
        }
        Ok(FileResult {
            file: file.to_string(),
            outcomes,
        })
    }

    /// Normal form of a checked definition or goal, printed as surface syntax.
    pub fn normalize(&self, name: &str) -> Option<String> {
        let t = self.kernel.normalize(name)?;
        Some(self.print(&t))
    }

    pub fn print(&self, t: &Term) -> String {
        let scope = &self.scope;
        crate::print::print_with_globals(t, &[], &|s| scope.contains(s))
    }
}
