/**
 * Long-lived runner process: newline-delimited JSON requests on stdin,
 * one JSON response per line on stdout.  Jobs run concurrently up to
 * --max-concurrent; each job is its own OS process with its own scratch
 * directory.  A malformed request produces an error response and the
 * loop continues.
 *
 * Usage: node dist/runner.js [--max-concurrent N] [--artifacts-dir DIR]
 *                            [--python PATH]
 */

import { createInterface } from "node:readline";

import { probeHealth } from "./health.js";
import { DEFAULT_TIMEOUT_S, executeScript } from "./sandbox.js";
import { Response, parseRequest } from "./protocol.js";

interface RunnerConfig {
  maxConcurrent: number;
  artifactsDir?: string;
  python: string;
}

function parseArgs(argv: string[]): RunnerConfig {
  const config: RunnerConfig = { maxConcurrent: 4, python: "python3" };
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--max-concurrent") config.maxConcurrent = Math.max(1, Number(argv[++i]));
    else if (arg === "--artifacts-dir") config.artifactsDir = argv[++i];
    else if (arg === "--python") config.python = argv[++i];
    else {
      process.stderr.write(`unknown argument: ${arg}\n`);
      process.exit(2);
    }
  }
  return config;
}

function send(message: Response): void {
  process.stdout.write(JSON.stringify(message) + "\n");
}

export function main(): void {
  const config = parseArgs(process.argv.slice(2));
  let running = 0;
  const queue: Array<() => void> = [];

  const acquire = (): Promise<void> =>
    new Promise((resolve) => {
      if (running < config.maxConcurrent) {
        running++;
        resolve();
      } else {
        queue.push(() => {
          running++;
          resolve();
        });
      }
    });

  const release = (): void => {
    running--;
    const next = queue.shift();
    if (next) next();
  };

  const rl = createInterface({ input: process.stdin, terminal: false });
  rl.on("line", (line) => {
    const trimmed = line.trim();
    if (!trimmed) return;
    let request;
    try {
      request = parseRequest(trimmed);
    } catch (err) {
      let id = "";
      try {
        id = String((JSON.parse(trimmed) as Record<string, unknown>).id ?? "");
      } catch {
        // not even JSON; no id to echo
      }
      send({ id, status: "error", error: (err as Error).message });
      return;
    }
    if (request.op === "health") {
      send({ id: request.id, status: "ok", health: probeHealth(config.python, config.maxConcurrent) });
      return;
    }
    void (async () => {
      await acquire();
      try {
        const response = await executeScript(
          request.id,
          request.script,
          request.timeout_s ?? DEFAULT_TIMEOUT_S,
          { python: config.python, artifactsDir: config.artifactsDir },
        );
        send(response);
      } catch (err) {
        send({ id: request.id, status: "error", error: String(err) });
      } finally {
        release();
      }
    })();
  });
  rl.on("close", () => {
    // stdin closed: finish in-flight jobs, then the event loop drains
  });
}

main();
