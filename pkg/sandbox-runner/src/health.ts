/** Runtime availability probe reported on the health op. */

import { spawnSync } from "node:child_process";

import { HealthInfo } from "./protocol.js";

export const RUNNER_VERSION = "0.1.0";

function probe(python: string, args: string[]): { ok: boolean; stdout: string } {
  const result = spawnSync(python, args, { encoding: "utf8", timeout: 15000 });
  return { ok: result.status === 0, stdout: (result.stdout ?? "").trim() };
}

export function probeHealth(python: string, maxConcurrent: number): HealthInfo {
  const version = probe(python, ["--version"]);
  const opensees = version.ok ? probe(python, ["-c", "import openseespy.opensees"]) : { ok: false, stdout: "" };
  const opsvis = version.ok ? probe(python, ["-c", "import opsvis"]) : { ok: false, stdout: "" };
  return {
    version: RUNNER_VERSION,
    python: version.ok ? version.stdout : null,
    opensees_available: opensees.ok,
    opsvis_available: opsvis.ok,
    max_concurrent: maxConcurrent,
  };
}
