/**
 * The IPC contract: one JSON message per line over the runner's stdio,
 * and the result protocol generated scripts must follow: print the
 * delimiter line `===RESULT===` followed by ONE single-line JSON payload
 * `{"schema": "beam-result/v1", "reactions": [...], "model": {...}}`.
 * The parser takes the LAST delimiter in stdout, so earlier noise never
 * corrupts the payload.
 */

export const RESULT_DELIMITER = "===RESULT===";
export const RESULT_SCHEMA = "beam-result/v1";

export type ExecuteRequest = {
  id: string;
  op: "execute";
  script: string;
  timeout_s?: number;
};

export type HealthRequest = {
  id: string;
  op: "health";
};

export type Request = ExecuteRequest | HealthRequest;

export type JobStatus =
  | "ok"
  | "timeout"
  | "nonzero_exit"
  | "payload_missing"
  | "payload_malformed"
  | "error";

export interface ExecuteResponse {
  id: string;
  status: JobStatus;
  payload: unknown | null;
  stdout: string;
  stderr: string;
  exit_code: number | null;
  wall_time_s: number;
  artifacts: string[];
  error: string | null;
}

export interface HealthInfo {
  version: string;
  python: string | null;
  opensees_available: boolean;
  opsvis_available: boolean;
  max_concurrent: number;
}

export interface HealthResponse {
  id: string;
  status: "ok";
  health: HealthInfo;
}

export interface ErrorResponse {
  id: string;
  status: "error";
  error: string;
}

export type Response = ExecuteResponse | HealthResponse | ErrorResponse;

export class PayloadExtractionError extends Error {
  constructor(
    public readonly kind: "payload_missing" | "payload_malformed",
    message: string,
  ) {
    super(message);
  }
}

/** Pull the payload following the LAST delimiter line out of stdout. */
export function extractPayload(stdout: string): unknown {
  const lines = stdout.split(/\r?\n/);
  let at = -1;
  for (let i = 0; i < lines.length; i++) {
    if (lines[i].trim() === RESULT_DELIMITER) at = i;
  }
  if (at < 0) {
    throw new PayloadExtractionError(
      "payload_missing",
      `no ${RESULT_DELIMITER} line in script output`,
    );
  }
  for (let i = at + 1; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    try {
      const payload = JSON.parse(line);
      if (payload === null || typeof payload !== "object") {
        throw new PayloadExtractionError("payload_malformed", "payload must be a JSON object");
      }
      return payload;
    } catch (err) {
      if (err instanceof PayloadExtractionError) throw err;
      throw new PayloadExtractionError(
        "payload_malformed",
        `payload line is not valid JSON: ${(err as Error).message}`,
      );
    }
  }
  throw new PayloadExtractionError(
    "payload_missing",
    "delimiter present but no payload line follows",
  );
}

export function parseRequest(line: string): Request {
  let obj: unknown;
  try {
    obj = JSON.parse(line);
  } catch (err) {
    throw new Error(`request is not valid JSON: ${(err as Error).message}`);
  }
  if (obj === null || typeof obj !== "object") {
    throw new Error("request must be a JSON object");
  }
  const req = obj as Record<string, unknown>;
  if (typeof req.id !== "string" || req.id.length === 0) {
    throw new Error('request needs a string "id"');
  }
  if (req.op === "health") {
    return { id: req.id, op: "health" };
  }
  if (req.op === "execute") {
    if (typeof req.script !== "string" || req.script.length === 0) {
      throw new Error('execute request needs a non-empty "script"');
    }
    const timeout = req.timeout_s === undefined ? undefined : Number(req.timeout_s);
    if (timeout !== undefined && (!Number.isFinite(timeout) || timeout <= 0)) {
      throw new Error('"timeout_s" must be a positive number');
    }
    return { id: req.id, op: "execute", script: req.script, timeout_s: timeout };
  }
  throw new Error(`unknown op ${JSON.stringify(req.op)}`);
}
