import json

from main import ExitCode, main

KEY_SPEC = "<javax.crypto.spec.SecretKeySpec: void <init>(byte[],java.lang.String)>"


def test_findings_exit_code(fixture_path, capsys):
    assert main(["analyze", fixture_path("password_encryptor.tir")]) == ExitCode.FINDINGS
    out = capsys.readouterr().out
    assert "defaultkey" in out


def test_clean_exit_code(fixture_path, capsys):
    assert main(["analyze", fixture_path("hex_key.tir"), "--rules", "1"]) == ExitCode.CLEAN


def test_depth_flag(fixture_path, capsys):
    assert main(["analyze", fixture_path("hex_key.tir"), "--rules", "1", "--depth", "2"]) == ExitCode.FINDINGS
    assert "6A5B7C8A" in capsys.readouterr().out


def test_errors_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.tir"
    bad.write_text("class A {\n  method void f() {\n    r1 = = 1\n  }\n}\n", encoding="utf-8")
    assert main(["analyze", str(bad)]) == ExitCode.ERROR
    assert main(["analyze", str(tmp_path / "missing.tir")]) == ExitCode.ERROR
    assert main(["analyze", str(bad), "--rules", "99"]) == ExitCode.ERROR
    assert main(["analyze", "--depth", "-1", str(bad)]) == ExitCode.ERROR
    assert capsys.readouterr().out == ""


def test_cycle_in_manifest_exits_two(tmp_path):
    (tmp_path / "A.tir").write_text("class A {\n}\n", encoding="utf-8")
    manifest = tmp_path / "project.manifest"
    manifest.write_text("subproject a\n  files *.tir\n  deps b\nsubproject b\n  files *.tir\n  deps a\n",
                        encoding="utf-8")
    assert main(["analyze", "--manifest", str(manifest)]) == ExitCode.ERROR


def test_json_output_and_zero_budget(fixture_path, capsys):
    code = main(["analyze", fixture_path("password_encryptor.tir"), "--budget", "0", "--format", "json"])
    doc = json.loads(capsys.readouterr().out)
    assert code == ExitCode.CLEAN
    assert doc["findings"] == []
    assert doc["partialRoots"] == ["<inputs>"]


def test_no_refine_flag(fixture_path, capsys):
    main(["analyze", fixture_path("password_encryptor.tir"), "--rules", "1", "--no-refine", "--format", "json"])
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["findings"]) >= 4
    assert doc["config"]["refine"] is False


def test_list_rules(capsys):
    assert main(["analyze", "--list-rules"]) == ExitCode.CLEAN
    out = capsys.readouterr().out
    assert out.count("\n") > 16
    assert "16 [H] Insecure cryptographic hash" in out


def test_dump_callgraph(fixture_path, capsys):
    assert main(["analyze", fixture_path("password_encryptor.tir"), "--dump-callgraph"]) == ExitCode.CLEAN
    assert "-> <Crypto: byte[] encrypt(java.lang.String,java.lang.String)>" in capsys.readouterr().out


def test_dump_slice(fixture_path, capsys):
    assert main(["analyze", fixture_path("password_encryptor.tir"), "--dump-slice", f"{KEY_SPEC}#0"]) == ExitCode.CLEAN
    out = capsys.readouterr().out
    assert "chain 0:" in out
    assert "constant 'defaultkey'" in out


def test_bad_dump_slice(fixture_path):
    assert main(["analyze", fixture_path("password_encryptor.tir"), "--dump-slice", KEY_SPEC]) == ExitCode.ERROR


def test_manifest_roots_in_report(fixture_path, capsys):
    main(["analyze", "--manifest", fixture_path("ranger/project.manifest"), "--format", "json"])
    doc = json.loads(capsys.readouterr().out)
    assert {f["root"] for f in doc["findings"]} == {"plugins-kms", "security-admin"}
