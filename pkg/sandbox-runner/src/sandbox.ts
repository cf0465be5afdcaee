/**
 * Executes one script per fresh Python subprocess inside a scratch
 * working directory, with a hard wall-clock kill at the timeout.
 * Isolation is subprocess + scratch dir + stripped environment; network
 * denial is best-effort (no proxy variables), not OS-enforced.
 */

import { spawn } from "node:child_process";
import { mkdtemp, mkdir, readdir, rename, rm, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import path from "node:path";

import { ExecuteResponse, JobStatus, PayloadExtractionError, extractPayload } from "./protocol.js";

const OUTPUT_CAP_BYTES = 4 * 1024 * 1024;
const ARTIFACT_EXTENSIONS = new Set([".png", ".svg", ".pdf", ".jpg", ".jpeg"]);

export const DEFAULT_TIMEOUT_S = 30;

export interface SandboxOptions {
  python?: string;
  artifactsDir?: string;
}

interface ProcessOutcome {
  exitCode: number | null;
  timedOut: boolean;
  stdout: string;
  stderr: string;
}

function scratchEnv(scratch: string): NodeJS.ProcessEnv {
  return {
    PATH: "/usr/local/bin:/usr/bin:/bin",
    HOME: scratch,
    TMPDIR: scratch,
    PYTHONDONTWRITEBYTECODE: "1",
    PYTHONUNBUFFERED: "1",
    MPLBACKEND: "Agg",
    no_proxy: "*",
    NO_PROXY: "*",
  };
}

function runPython(
  python: string,
  scriptPath: string,
  scratch: string,
  timeoutS: number,
): Promise<ProcessOutcome> {
  return new Promise((resolve) => {
    const child = spawn(python, [scriptPath], {
      cwd: scratch,
      env: scratchEnv(scratch),
      stdio: ["ignore", "pipe", "pipe"],
    });
    let stdout = "";
    let stderr = "";
    let timedOut = false;
    const timer = setTimeout(() => {
      timedOut = true;
      child.kill("SIGKILL");
    }, timeoutS * 1000);

    child.stdout.on("data", (chunk: Buffer) => {
      if (stdout.length < OUTPUT_CAP_BYTES) stdout += chunk.toString("utf8");
    });
    child.stderr.on("data", (chunk: Buffer) => {
      if (stderr.length < OUTPUT_CAP_BYTES) stderr += chunk.toString("utf8");
    });
    child.on("error", (err) => {
      clearTimeout(timer);
      resolve({ exitCode: null, timedOut: false, stdout, stderr: stderr + String(err) });
    });
    child.on("close", (code) => {
      clearTimeout(timer);
      resolve({ exitCode: code, timedOut, stdout, stderr });
    });
  });
}

async function collectArtifacts(
  scratch: string,
  jobId: string,
  artifactsDir?: string,
): Promise<string[]> {
  let names: string[];
  try {
    names = await readdir(scratch);
  } catch {
    return [];
  }
  const produced = names.filter((n) => ARTIFACT_EXTENSIONS.has(path.extname(n).toLowerCase()));
  if (produced.length === 0 || !artifactsDir) return [];
  const target = path.join(artifactsDir, jobId);
  await mkdir(target, { recursive: true });
  const moved: string[] = [];
  for (const name of produced) {
    const dest = path.join(target, name);
    await rename(path.join(scratch, name), dest);
    moved.push(dest);
  }
  return moved;
}

export async function executeScript(
  id: string,
  script: string,
  timeoutS: number = DEFAULT_TIMEOUT_S,
  options: SandboxOptions = {},
): Promise<ExecuteResponse> {
  const python = options.python ?? "python3";
  const started = Date.now();
  const scratch = await mkdtemp(path.join(tmpdir(), "beam-sbx-"));
  try {
    const scriptPath = path.join(scratch, "script.py");
    await writeFile(scriptPath, script, "utf8");
    const outcome = await runPython(python, scriptPath, scratch, timeoutS);
    const wall = (Date.now() - started) / 1000;
    const artifacts = await collectArtifacts(scratch, id, options.artifactsDir);

    const base = {
      id,
      stdout: outcome.stdout,
      stderr: outcome.stderr,
      exit_code: outcome.exitCode,
      wall_time_s: wall,
      artifacts,
    };
    if (outcome.timedOut) {
      return { ...base, status: "timeout", payload: null, error: `killed at ${timeoutS}s` };
    }
    if (outcome.exitCode !== 0) {
      return {
        ...base,
        status: "nonzero_exit",
        payload: null,
        error: `script exited with code ${outcome.exitCode}`,
      };
    }
    let payload: unknown;
    try {
      payload = extractPayload(outcome.stdout);
    } catch (err) {
      const kind: JobStatus =
        err instanceof PayloadExtractionError ? err.kind : "payload_malformed";
      return { ...base, status: kind, payload: null, error: (err as Error).message };
    }
    return { ...base, status: "ok", payload, error: null };
  } finally {
    await rm(scratch, { recursive: true, force: true });
  }
}
