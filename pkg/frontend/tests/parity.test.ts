/**
 * Integration parity against the real backend (acceptance: UI parity).
 *
 * Spawns the Python service, drives the published five-point elicitation
 * through the browser flow objects, and checks two equalities:
 *  - the stored model is byte-identical to what CLI batch elicitation
 *    produces from the equivalent session file;
 *  - a what-if request with zero overrides reproduces the stored evaluation
 *    byte-for-byte.
 */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { copyFileSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/client.js";
import type { ModelDoc } from "../src/types.js";
import { ElicitationWizard } from "../src/wizard.js";

const here = dirname(fileURLToPath(import.meta.url));
const repoRoot = join(here, "..", "..");
const starterModelPath = join(here, "fixtures", "starter-model.json");

const PYTHON = process.env.BENCHRANK_PYTHON ?? "python3";

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const srv = createServer();
    srv.listen(0, "127.0.0.1", () => {
      const address = srv.address();
      if (typeof address === "object" && address) {
        const port = address.port;
        srv.close(() => resolve(port));
      } else {
        reject(new Error("no port assigned"));
      }
    });
  });
}

let server: ChildProcess | null = null;
let base = "";
let storeDir = "";
let workDir = "";
let client: ApiClient;

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "benchrank-ui-"));
  storeDir = join(workDir, "store");
  const port = await freePort();
  base = `http://127.0.0.1:${port}`;
  server = spawn(
    PYTHON,
    ["-m", "benchrank.cli", "serve", "--store", storeDir, "--port", String(port)],
    { cwd: repoRoot, stdio: ["ignore", "pipe", "pipe"] },
  );
  server.stderr?.on("data", () => undefined); // keep the pipe drained
  const deadline = Date.now() + 20_000;
  for (;;) {
    try {
      const response = await fetch(`${base}/api/v1/models`);
      if (response.ok) break;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error("backend did not come up in 20s");
    await new Promise((r) => setTimeout(r, 200));
  }
  client = new ApiClient(base);
}, 30_000);

afterAll(() => {
  server?.kill();
});

const FIG_ELEMENTS = [0, 17, 70, 140, 1000];
const FIG_GAPS = ["Weak", "Strong", "Strong", "VeryStrong"] as const;

describe("UI parity with the CLI", () => {
  it(
    "browser elicitation stores the same model as CLI batch elicitation",
    { timeout: 30_000 },
    async () => {
      const starter = JSON.parse(readFileSync(starterModelPath, "utf-8")) as ModelDoc;
      await client.putModel("ui-model", starter);

      // browser flow: create session, answer the published gaps, finalize
      const wizard = await ElicitationWizard.startUtility(
        client,
        "qscore_maxcut",
        FIG_ELEMENTS,
        1000,
      );
      for (const gap of FIG_GAPS) {
        await wizard.answerGap(gap);
      }
      expect(wizard.violations).toEqual([]);
      expect(wizard.canFinalize).toBe(true);
      const model = await wizard.finalize("ui-model");
      const maxcut = model.nodes.find((n) => n.id === "maxcut");
      const utilities = (maxcut?.utility?.breakpoints ?? []).map(([, u]) => u);
      expect(utilities[1]).toBeCloseTo(0.1333, 3);
      expect(utilities[3]).toBeCloseTo(0.6667, 3);

      // CLI batch flow from the equivalent session file
      const sessionFile = join(workDir, "session.json");
      writeFileSync(
        sessionFile,
        JSON.stringify({
          schema_version: 1,
          kind: "utility",
          metric_id: "qscore_maxcut",
          elements: FIG_ELEMENTS,
          good: 1000,
          gaps: [...FIG_GAPS],
        }),
      );
      const cliModelFile = join(workDir, "cli-model.json");
      copyFileSync(starterModelPath, cliModelFile);
      const result = spawnSync(
        PYTHON,
        [
          "-m",
          "benchrank.cli",
          "elicit",
          "utility",
          "--session",
          sessionFile,
          "--model",
          cliModelFile,
          "--node",
          "maxcut",
        ],
        { cwd: repoRoot, encoding: "utf-8" },
      );
      expect(result.status, result.stderr).toBe(0);

      // the UI-stored model file and the CLI-updated model file are identical bytes
      const uiStored = readFileSync(join(storeDir, "models", "ui-model.json"), "utf-8");
      const cliStored = readFileSync(cliModelFile, "utf-8");
      expect(uiStored).toBe(cliStored);
    },
  );

  it("what-if with empty overrides reproduces stored scores exactly", async () => {
    // give the evaluation something to rank
    const records = {
      schema_version: 1,
      records: [
        ["dwave-2000q", "maxcut", "qscore_maxcut", 70],
        ["dwave-2000q", "maxclique", "qscore_maxclique", 70],
        ["dwave-advantage", "maxcut", "qscore_maxcut", 140],
        ["dwave-advantage", "maxclique", "qscore_maxclique", 110],
      ].map(([alternative, family, metric, value]) => ({
        schema_version: 1,
        alternative_id: alternative,
        family,
        instance: "external",
        seed: 0,
        metrics: { [metric as string]: value },
        timestamp: "2026-08-10T00:00:00+00:00",
        provenance: "external",
        source: "vendor-published",
      })),
    };
    const report = await client.ingestRecords(records);
    expect(report.accepted).toBe(4);

    const evaluateBody = JSON.stringify({
      model_id: "ui-model",
      profiles: [],
      use_records: true,
    });
    const whatifBody = JSON.stringify({
      model_id: "ui-model",
      overrides: [],
      profiles: [],
      use_records: true,
    });
    const stored = await (
      await fetch(`${base}/api/v1/evaluate`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: evaluateBody,
      })
    ).text();
    const transient = await (
      await fetch(`${base}/api/v1/whatif`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: whatifBody,
      })
    ).text();
    expect(transient).toBe(stored); // byte-for-byte
    const parsed = JSON.parse(stored);
    expect(parsed.ranking[0].alternative_id).toBe("dwave-advantage");
  });
});
