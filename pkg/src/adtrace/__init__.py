"""adtrace: ontology -> profile -> model traceability toolchain for
automated-driving systems engineering."""

from .errors import AdtError, GenerationError, ParseError, ResolutionError, TraceBuildError
from .findings import Finding, Severity, SourcePos, has_errors, sort_findings
from .model import (
    ArtifactDecl,
    ArtifactKind,
    Element,
    Interaction,
    Message,
    Model,
    RelInstance,
    Scenario,
    Scene,
    TraceDecl,
    TraceKind,
    UseCaseDecl,
    check_conformance,
    check_scenario_wellformed,
    derive_system_context,
)
from .ontology import (
    ConceptDecl,
    ConceptRef,
    LicenseDecision,
    Multiplicity,
    Ontology,
    RelationDecl,
    RelationKind,
    TranslationLink,
    ancestors,
    merge_ontologies,
    relation_licensed,
    validate_ontology,
)
from .parser import Document, parse_document, parse_model, parse_ontology, parse_profile
from .profile import (
    GenerationRules,
    Metaclass,
    Profile,
    RelationRef,
    Stereotype,
    check_profile,
    generate_profile,
)
from .serialize import (
    serialize_document,
    serialize_model,
    serialize_ontology,
    serialize_profile,
)
from .trace import (
    CoverageReport,
    Process15288,
    ProcessCoverage,
    RuleSet,
    StandardsMap,
    TraceEdge,
    TraceGraph,
    TraceNode,
    build_trace_graph,
    check_trace_completeness,
    detect_orphans,
    guideword_candidates,
    parse_rules,
    parse_standards_map,
    process_coverage,
)
from .emit import emit_context_dot, emit_report, emit_sequence_text, emit_usecase_dot
from .workspace import Workspace, load_workspace, load_workspace_files, validate_workspace

__version__ = "0.1.0"
