import pytest

from core.project import (
    DuplicateClassAcrossSubprojectsError,
    ManifestCycleError,
    ManifestError,
    MissingDependencyError,
    MissingFileError,
    classes_for_root,
    dependency_dag,
    parse_manifest,
    parse_manifest_text,
    reachable_subprojects,
    root_subprojects,
)


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def _class(name):
    return f"class {name} {{\n  static method void run() {{\n    return\n  }}\n}}\n"


def test_ranger_roots(fixture_path):
    manifest = parse_manifest(fixture_path("ranger/project.manifest"))
    dag = dependency_dag(manifest)
    assert root_subprojects(dag, include_tests=False) == ["plugins-kms", "security-admin"]
    assert root_subprojects(dag) == ["agents-unit-tests", "plugins-kms", "security-admin"]
    assert reachable_subprojects(dag, "plugins-kms") == ["agents-common", "credbuilder", "plugins-kms"]


def test_root_program_includes_dependencies(fixture_path):
    manifest = parse_manifest(fixture_path("ranger/project.manifest"))
    program = classes_for_root(manifest, "security-admin")
    concrete = sorted(n for n, c in program.classes.items() if not c.is_phantom)
    assert concrete == [
        "org.apache.ranger.admin.AdminService",
        "org.apache.ranger.credentialapi.CredentialBuilder",
        "org.apache.ranger.plugin.util.RangerConfiguration",
    ]


def test_diamond_is_loaded_once(tmp_path):
    for sub in ("top", "left", "right", "base"):
        _write(tmp_path, f"{sub}/{sub.title()}.tir", _class(sub.title()))
    manifest = parse_manifest_text(
        "subproject top\n  files top/*.tir\n  deps left, right\n"
        "subproject left\n  files left/*.tir\n  deps base\n"
        "subproject right\n  files right/*.tir\n  deps base\n"
        "subproject base\n  files base/*.tir\n",
        str(tmp_path),
    )
    assert root_subprojects(dependency_dag(manifest)) == ["top"]
    program = classes_for_root(manifest, "top")
    assert sorted(n for n, c in program.classes.items() if not c.is_phantom) == ["Base", "Left", "Right", "Top"]


def test_cycle_is_rejected(tmp_path):
    _write(tmp_path, "a/A.tir", _class("A"))
    with pytest.raises(ManifestCycleError) as info:
        parse_manifest_text(
            "subproject a\n  files a/*.tir\n  deps b\nsubproject b\n  files a/*.tir\n  deps a\n",
            str(tmp_path),
        )
    assert "a -> b -> a" in str(info.value) or "b -> a -> b" in str(info.value)


def test_missing_dependency(tmp_path):
    _write(tmp_path, "a/A.tir", _class("A"))
    with pytest.raises(MissingDependencyError):
        parse_manifest_text("subproject a\n  files a/*.tir\n  deps ghost\n", str(tmp_path))


def test_missing_files(tmp_path):
    with pytest.raises(MissingFileError):
        parse_manifest_text("subproject a\n  files nowhere/*.tir\n", str(tmp_path))


def test_stray_line(tmp_path):
    with pytest.raises(ManifestError) as info:
        parse_manifest_text("files a/*.tir\n", str(tmp_path), "m.manifest")
    assert info.value.line == 1


def test_duplicate_class_across_subprojects(tmp_path):
    _write(tmp_path, "a/A.tir", _class("Shared"))
    _write(tmp_path, "b/B.tir", _class("Shared"))
    manifest = parse_manifest_text(
        "subproject a\n  files a/*.tir\n  deps b\nsubproject b\n  files b/*.tir\n",
        str(tmp_path),
    )
    with pytest.raises(DuplicateClassAcrossSubprojectsError):
        classes_for_root(manifest, "a")
