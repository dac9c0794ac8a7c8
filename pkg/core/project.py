"""
Subproject manifests and the dependency DAG.

A manifest lists subprojects, the TIR files each one owns and the
subprojects it depends on:

    subproject security-admin
      files admin/*.tir
      deps credbuilder, utils
    subproject credbuilder
      files cred/*.tir
      test true

Root subprojects (nothing depends on them) are analysed independently, each
over the classes of everything reachable from it.
"""
from __future__ import annotations

import glob
import logging
import os
import re
from dataclasses import dataclass, field
from typing import Optional

import networkx as nx

from core.ir import ClassDef, Program
from core.parser import link_program, parse_class_defs

logger = logging.getLogger(__name__)

_SUBPROJECT_RE = re.compile(r"^subproject\s+(?P<name>[\w.\-]+)\s*$")
_KEY_RE = re.compile(r"^(?P<key>files|deps|test)\s*:?\s*(?P<value>.*)$")


class ManifestError(ValueError):
    def __init__(self, message: str, line: int = 0, source: str = ""):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line else (f"{source}: " if source else "")
        super().__init__(f"{where}{message}")


class ManifestCycleError(ManifestError):
    pass


class MissingDependencyError(ManifestError):
    pass


class MissingFileError(ManifestError):
    pass


class DuplicateClassAcrossSubprojectsError(ManifestError):
    pass


@dataclass(frozen=True)
class Subproject:
    name: str
    files: tuple[str, ...] = ()
    deps: tuple[str, ...] = ()
    is_test: bool = False


@dataclass
class SubprojectManifest:
    subprojects: dict[str, Subproject] = field(default_factory=dict)
    base_dir: str = "."
    source: str = ""

    def paths_of(self, name: str) -> list[str]:
        """Concrete .tir paths of a subproject, glob patterns expanded and sorted."""
        paths = []
        for pattern in self.subprojects[name].files:
            full = pattern if os.path.isabs(pattern) else os.path.join(self.base_dir, pattern)
            matched = sorted(glob.glob(full))
            if not matched:
                raise MissingFileError(f"subproject {name}: no file matches {pattern}", source=self.source)
            paths.extend(matched)
        return paths


def parse_manifest_text(text: str, base_dir: str = ".", source: str = "") -> SubprojectManifest:
    manifest = SubprojectManifest(base_dir=base_dir, source=source)
    current: Optional[dict] = None
    entries: list[dict] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SUBPROJECT_RE.match(line)
        if m:
            current = {"name": m["name"], "files": [], "deps": [], "test": False, "line": lineno}
            entries.append(current)
            continue
        m = _KEY_RE.match(line)
        if m is None or current is None:
            raise ManifestError(f"unexpected line {line!r}", lineno, source)
        values = [v for v in re.split(r"[,\s]+", m["value"]) if v]
        if m["key"] == "test":
            current["test"] = (values or ["true"])[0].lower() in ("true", "yes", "1")
        else:
            current[m["key"]].extend(values)

    for entry in entries:
        if entry["name"] in manifest.subprojects:
            raise ManifestError(f"duplicate subproject {entry['name']}", entry["line"], source)
        manifest.subprojects[entry["name"]] = Subproject(
            entry["name"], tuple(entry["files"]), tuple(entry["deps"]), entry["test"]
        )
    for entry in entries:
        for dep in entry["deps"]:
            if dep not in manifest.subprojects:
                raise MissingDependencyError(f"{entry['name']} depends on unknown subproject {dep}",
                                             entry["line"], source)
    dependency_dag(manifest)
    for name in manifest.subprojects:
        manifest.paths_of(name)
    return manifest


def parse_manifest(path: str) -> SubprojectManifest:
    with open(path, encoding="utf-8") as f:
        text = f.read()
    return parse_manifest_text(text, os.path.dirname(os.path.abspath(path)), path)


def dependency_dag(manifest: SubprojectManifest) -> nx.DiGraph:
    """Edges point from a subproject to each of its dependencies."""
    dag = nx.DiGraph()
    for sub in manifest.subprojects.values():
        dag.add_node(sub.name, test=sub.is_test)
        for dep in sub.deps:
            dag.add_edge(sub.name, dep)
    if not nx.is_directed_acyclic_graph(dag):
        cycle = [u for u, _ in nx.find_cycle(dag)]
        raise ManifestCycleError(f"dependency cycle: {' -> '.join(cycle + cycle[:1])}", source=manifest.source)
    return dag


def root_subprojects(dag: nx.DiGraph, include_tests: bool = True) -> list[str]:
    roots = [n for n in dag.nodes if dag.in_degree(n) == 0]
    if not include_tests:
        roots = [n for n in roots if not dag.nodes[n].get("test")]
    return sorted(roots)


def reachable_subprojects(dag: nx.DiGraph, root: str) -> list[str]:
    return sorted(nx.descendants(dag, root) | {root})


def _read_sources(paths: list[str]) -> list[tuple[str, str]]:
    sources = []
    for path in paths:
        with open(path, encoding="utf-8") as f:
            sources.append((path, f.read()))
    return sources


def classes_for_root(manifest: SubprojectManifest, root: str, dag: Optional[nx.DiGraph] = None) -> Program:
    """Program over the root's classes and those of every subproject it reaches."""
    if root not in manifest.subprojects:
        raise MissingDependencyError(f"unknown subproject {root}", source=manifest.source)
    dag = dag if dag is not None else dependency_dag(manifest)
    merged: dict[str, ClassDef] = {}
    owner: dict[str, str] = {}
    for name in reachable_subprojects(dag, root):
        for cls in parse_class_defs(_read_sources(manifest.paths_of(name))).values():
            if cls.name in merged:
                raise DuplicateClassAcrossSubprojectsError(
                    f"class {cls.name} defined in both {owner[cls.name]} and {name}", source=manifest.source
                )
            merged[cls.name] = cls
            owner[cls.name] = name
    logger.debug(f"root {root}: {len(merged)} classes from {len(set(owner.values()))} subproject(s)")
    return link_program(merged, manifest)


def program_from_files(paths: list[str]) -> Program:
    return link_program(parse_class_defs(_read_sources(sorted(paths))))
