"""
Benchmark generation: pragma-removal schemata over verified SPARK projects,
the medium-required inclusion filter and the JSON manifest.
"""
import hashlib
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from django.core.exceptions import ValidationError

from ..exceptions import ProverFailure
from ..models import (
    ANNOTATION_KINDS,
    BenchmarkCase,
    CaseDraft,
    FilterResult,
    FilterStatus,
    Manifest,
    ManifestCase,
    ManifestFile,
    PragmaKind,
    Schema,
    SparkProject,
)
from ..utils.validators import normalize_relative_path
from .ada_lex import apply_cuts, removal_cuts, restore_cuts, scan_structure, source_digest

logger = logging.getLogger(__name__)

MANIFEST_VERSION = 1

CORPUS_INDEX = 'corpus.json'

_IGNORED_DIRS = {'obj', 'gnatprove', '.git'}


def _file_digest(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def discover_project(root, name=None, project_file=None, target_body=None):
    """Build a SparkProject from a directory of .gpr/.adc/.ads/.adb files"""
    root = Path(root).resolve()
    if not root.is_dir():
        raise ValidationError(f"Project directory {root} does not exist")

    gpr_files, config_files, spec_files, body_files = [], [], [], []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames[:] = sorted(d for d in dirnames if d not in _IGNORED_DIRS)
        for filename in sorted(filenames):
            relative = (Path(dirpath) / filename).relative_to(root).as_posix()
            suffix = Path(filename).suffix.lower()
            if suffix == '.gpr':
                gpr_files.append(relative)
            elif suffix == '.adc':
                config_files.append(relative)
            elif suffix == '.ads':
                spec_files.append(relative)
            elif suffix == '.adb':
                body_files.append(relative)

    if project_file is None:
        if len(gpr_files) != 1:
            raise ValidationError(f"Expected exactly one .gpr file in {root}, found {len(gpr_files)}")
        project_file = gpr_files[0]
    project_file = normalize_relative_path(project_file)

    if target_body is None:
        if len(body_files) != 1:
            raise ValidationError(f"{root} has {len(body_files)} bodies; name the target body explicitly")
        target_body = body_files[0]
    target_body = normalize_relative_path(target_body)

    if target_body not in body_files:
        raise ValidationError(f"Target body {target_body} is not a .adb file of {root}")
    if not (root / project_file).is_file():
        raise ValidationError(f"Project file {project_file} does not exist in {root}")

    return SparkProject(
        name=name or root.name,
        root=root,
        project_file=project_file,
        config_files=tuple(config_files),
        spec_files=tuple(spec_files),
        body_files=tuple(body_files),
        target_body=target_body,
    )


def load_corpus(path):
    """Projects of a corpus index (corpus.json) or of a single project directory"""
    path = Path(path)
    if path.is_dir() and (path / CORPUS_INDEX).is_file():
        path = path / CORPUS_INDEX

    if path.is_dir():
        return [discover_project(path)]

    with open(path, 'r', encoding='utf-8') as f:
        index = json.load(f)

    projects = []
    for entry in index.get('programs', []):
        projects.append(discover_project(
            path.parent / entry['root'],
            name=entry.get('name'),
            project_file=entry.get('project_file'),
            target_body=entry.get('target_body'),
        ))

    names = [project.name for project in projects]
    if len(names) != len(set(names)):
        raise ValidationError(f"Duplicate program names in {path}")

    logger.info(f"Loaded {len(projects)} programs from {path}")
    return projects


def _last_invariant(structure, loop_index):
    invariants = structure.sites_in_loop(loop_index, {PragmaKind.LOOP_INVARIANT})
    return invariants[-1] if invariants else None


def schema_site_sets(structure, schema):
    """Site groups removed by one schema; one group per generated case"""
    schema = Schema(schema)

    if schema == Schema.ALL_PRAGMAS:
        sites = [site for site in structure.sites if site.kind in ANNOTATION_KINDS]
        return [sites] if sites else []

    if schema == Schema.LAST_INVARIANT_ALL_LOOPS:
        sites = [_last_invariant(structure, loop.index) for loop in structure.loops]
        sites = [site for site in sites if site is not None]
        return [sites] if sites else []

    if schema == Schema.ALL_PRAGMAS_ONE_LOOP:
        return [
            structure.sites_in_loop(loop.index, ANNOTATION_KINDS)
            for loop in structure.loops
            if loop.invariant_count >= 2
        ]

    if schema == Schema.LAST_INVARIANT_ONE_LOOP:
        return [
            [_last_invariant(structure, loop.index)]
            for loop in structure.loops
            if loop.invariant_count >= 1
        ]

    # OneAssert: one case per occurrence
    return [[site] for site in structure.sites if site.kind == PragmaKind.ASSERT]


def enumerate_cases(project, schema):
    """Case drafts (no baseline yet) for one project and schema"""
    schema = Schema(schema)
    source = project.read(project.target_body)
    structure = scan_structure(source)

    drafts = []
    for occurrence, sites in enumerate(schema_site_sets(structure, schema)):
        sites = sorted(sites, key=lambda site: site.span.start)
        cuts = removal_cuts(source, sites)
        drafts.append(CaseDraft(
            case_id=f"{project.name}.{schema.value}.{occurrence}",
            project=project,
            schema_id=schema,
            removed_sites=sites,
            mutated_body=apply_cuts(source, cuts),
            original_digest=structure.source_digest,
            cuts=cuts,
        ))

    logger.debug(f"{project.name}: {len(drafts)} {schema.value} draft(s)")
    return drafts


def filter_case(draft, prover):
    """Keep a draft only if its mutated project proves with mediums and no errors"""
    overlay = {draft.project.target_body: draft.mutated_body}
    try:
        report = prover.run(draft.project, overlay)
    except ProverFailure as e:
        return FilterResult(status=FilterStatus.UNRESOLVED, draft=draft, reason=str(e))

    if report.unresolved:
        return FilterResult(
            status=FilterStatus.UNRESOLVED,
            draft=draft,
            reason=f"prover did not finish (exit status {report.exit_status})",
        )
    if report.errors:
        return FilterResult(status=FilterStatus.REJECTED, draft=draft, reason="baseline errors")
    if not report.mediums:
        return FilterResult(status=FilterStatus.REJECTED, draft=draft, reason="already fully verified")

    case = BenchmarkCase(**dict(draft), baseline=report)
    return FilterResult(status=FilterStatus.ACCEPTED, draft=draft, case=case)


def build_benchmark(projects, prover, schemata=None, workers=1):
    """Enumerate and filter every (project, schema) pair; results keep enumeration order"""
    schemata = [Schema(schema) for schema in (schemata or list(Schema))]
    drafts = [
        draft
        for project in projects
        for schema in schemata
        for draft in enumerate_cases(project, schema)
    ]
    logger.info(f"Filtering {len(drafts)} drafts with {workers} worker(s)")

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda draft: filter_case(draft, prover), drafts))
    else:
        results = [filter_case(draft, prover) for draft in drafts]

    accepted = sum(1 for result in results if result.status == FilterStatus.ACCEPTED)
    logger.info(f"Accepted {accepted} of {len(drafts)} drafts")
    return results


def _manifest_path(out):
    out = Path(out)
    return out / 'manifest.json' if out.is_dir() or not out.suffix else out


def emit_manifest(cases, out):
    """Write cases to a JSON manifest; project roots are stored relative to it"""
    path = _manifest_path(out)
    path.parent.mkdir(parents=True, exist_ok=True)

    case_ids = [case.case_id for case in cases]
    if len(case_ids) != len(set(case_ids)):
        raise ValidationError("Case ids in a manifest must be unique")

    manifest_cases = []
    for case in cases:
        project = case.project.model_copy(update={'root': Path(case.project.root).resolve()})
        files = [
            ManifestFile(path=relative, sha256=_file_digest(project.path(relative)))
            for relative in project.files()
        ]
        fields = {**dict(case), 'project': project}
        fields.pop('files', None)
        manifest_cases.append(ManifestCase(**fields, files=files))
    manifest = Manifest(version=MANIFEST_VERSION, cases=manifest_cases)

    data = manifest.model_dump(mode='json', by_alias=True)
    for entry, case in zip(data['cases'], manifest.cases):
        entry['project']['root'] = Path(os.path.relpath(case.project.root, path.parent.resolve())).as_posix()

    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, ensure_ascii=False, indent=2)
        f.write('\n')

    logger.info(f"Wrote {len(manifest.cases)} cases to {path}")
    return manifest


def load_manifest(path, verify=True):
    """Read a manifest; with `verify`, project files must still match their digests"""
    path = _manifest_path(path)
    with open(path, 'r', encoding='utf-8') as f:
        data = json.load(f)

    if data.get('version') != MANIFEST_VERSION:
        raise ValidationError(f"Unsupported manifest version {data.get('version')}")

    base = path.parent.resolve()
    for entry in data.get('cases', []):
        entry['project']['root'] = str((base / entry['project']['root']).resolve())

    manifest = Manifest.model_validate(data)
    case_ids = manifest.case_ids()
    if len(case_ids) != len(set(case_ids)):
        raise ValidationError(f"Duplicate case ids in {path}")

    if verify:
        for case in manifest.cases:
            verify_case(case)
    return manifest


def verify_case(case):
    """Check referenced file digests and the oracle restoration of a manifest case"""
    for manifest_file in case.files:
        actual = _file_digest(case.project.path(manifest_file.path))
        if actual != manifest_file.sha256:
            raise ValidationError(
                f"{case.case_id}: {manifest_file.path} changed since the manifest was written"
            )
    if source_digest(restore_cuts(case.mutated_body, case.cuts)) != case.original_digest:
        raise ValidationError(f"{case.case_id}: removed sites do not restore the original body")
