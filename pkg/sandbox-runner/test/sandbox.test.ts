import { mkdtemp, readFile, readdir, rm } from "node:fs/promises";
import { tmpdir } from "node:os";
import path from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, describe, expect, it } from "vitest";

import { executeScript } from "../src/sandbox.js";

const here = path.dirname(fileURLToPath(import.meta.url));
const goldenDir = path.join(here, "..", "golden");

type Entry = { position: number; V: number };
type Payload = { schema: string; reactions: Entry[]; model: { id: string } };

// frozen from the analytical oracle: [pinned V, roller V] in kN, up positive
const GOLDEN_EXPECTED: Record<string, [number, number]> = {
  "ss_i.py": [6.0, 4.0],
  "ss_ii.py": [7.5, 2.5],
  "ss_iii.py": [56.0, 54.0],
  "ss_iv.py": [11.0, 9.0],
  "oh_i.py": [-8.0, 18.0],
  "oh_ii.py": [-7.0, 17.0],
  "oh_iii.py": [-4.0, 114.0],
  "oh_iv.py": [-6.0, 26.0],
};

describe("golden scripts, one per benchmark family", () => {
  for (const [name, expected] of Object.entries(GOLDEN_EXPECTED)) {
    it(`${name} executes to oracle-matching reactions`, async () => {
      const script = await readFile(path.join(goldenDir, name), "utf8");
      const result = await executeScript(`golden-${name}`, script, 30);
      expect(result.status).toBe("ok");
      const payload = result.payload as Payload;
      expect(payload.schema).toBe("beam-result/v1");
      expect(payload.reactions).toHaveLength(2);
      const sorted = [...payload.reactions].sort((a, b) => a.position - b.position);
      expect(Math.abs(sorted[0].V - expected[0])).toBeLessThan(1e-6);
      expect(Math.abs(sorted[1].V - expected[1])).toBeLessThan(1e-6);
    });
  }

  it("covers all eight families", async () => {
    const names = (await readdir(goldenDir)).filter((n) => n.endsWith(".py"));
    expect(names.sort()).toEqual(Object.keys(GOLDEN_EXPECTED).sort());
  });
});

describe("failure mapping", () => {
  it(
    "kills an infinite loop at the default 30 s timeout",
    async () => {
      const result = await executeScript("loop", "while True:\n    pass\n");
      expect(result.status).toBe("timeout");
      expect(result.wall_time_s).toBeGreaterThanOrEqual(29.5);
      expect(result.wall_time_s).toBeLessThan(35);
      expect(result.error).toContain("30");
    },
    45000,
  );

  it("reports a missing result block", async () => {
    const result = await executeScript("silent", "print('solved it, trust me')\n");
    expect(result.status).toBe("payload_missing");
    expect(result.payload).toBeNull();
  });

  it("reports a malformed payload", async () => {
    const script = 'print("===RESULT===")\nprint("{not json")\n';
    const result = await executeScript("garbled", script);
    expect(result.status).toBe("payload_malformed");
  });

  it("reports a crashing script with its stderr", async () => {
    const result = await executeScript("crash", "raise RuntimeError('boom')\n");
    expect(result.status).toBe("nonzero_exit");
    expect(result.exit_code).toBe(1);
    expect(result.stderr).toContain("boom");
  });
});

describe("payload fidelity", () => {
  it("takes the payload after the LAST delimiter, ignoring noise", async () => {
    const script = [
      "import json",
      'print("preliminary notes")',
      'print("===RESULT===")',
      'print(json.dumps({"schema": "beam-result/v1", "reactions": [], "draft": True}))',
      'print("wait, recomputing...")',
      'print("===RESULT===")',
      'print(json.dumps({"schema": "beam-result/v1", "reactions": [{"position": 0.0, "V": 1.5}]}))',
    ].join("\n");
    const result = await executeScript("noisy", script);
    expect(result.status).toBe("ok");
    const payload = result.payload as Payload;
    expect(payload.reactions).toEqual([{ position: 0.0, V: 1.5 }]);
  });
});

describe("isolation", () => {
  it("concurrent jobs cannot observe each other's files", async () => {
    const script = (tag: string) =>
      [
        "import pathlib, time, os",
        `pathlib.Path("data.txt").write_text("${tag}")`,
        "time.sleep(0.5)",
        'content = pathlib.Path("data.txt").read_text()',
        'others = sorted(p.name for p in pathlib.Path(".").iterdir())',
        "import json",
        'print("===RESULT===")',
        'print(json.dumps({"content": content, "files": others, "cwd": os.getcwd()}))',
      ].join("\n");
    const [a, b] = await Promise.all([
      executeScript("iso-a", script("alpha")),
      executeScript("iso-b", script("beta")),
    ]);
    const pa = a.payload as { content: string; files: string[]; cwd: string };
    const pb = b.payload as { content: string; files: string[]; cwd: string };
    expect(pa.content).toBe("alpha");
    expect(pb.content).toBe("beta");
    expect(pa.cwd).not.toBe(pb.cwd);
    expect(pa.files).toEqual(["data.txt", "script.py"]);
  });

  it("scratch directories are removed afterwards", async () => {
    const result = await executeScript("cwd-probe", 'import os, json\nprint("===RESULT===")\nprint(json.dumps({"cwd": os.getcwd()}))\n');
    const cwd = (result.payload as { cwd: string }).cwd;
    await expect(readdir(cwd)).rejects.toThrow();
  });
});

describe("artifacts", () => {
  let artifactsDir: string;

  afterAll(async () => {
    if (artifactsDir) await rm(artifactsDir, { recursive: true, force: true });
  });

  it("collects produced image files when configured", async () => {
    artifactsDir = await mkdtemp(path.join(tmpdir(), "beam-artifacts-"));
    const script = [
      "import json, pathlib",
      'pathlib.Path("diagram.svg").write_text("<svg></svg>")',
      'print("===RESULT===")',
      'print(json.dumps({"schema": "beam-result/v1", "reactions": []}))',
    ].join("\n");
    const result = await executeScript("art", script, 30, { artifactsDir });
    expect(result.status).toBe("ok");
    expect(result.artifacts).toHaveLength(1);
    expect(result.artifacts[0]).toContain("diagram.svg");
    const copied = await readFile(result.artifacts[0], "utf8");
    expect(copied).toBe("<svg></svg>");
  });
});
