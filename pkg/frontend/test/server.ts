/** Vitest global setup: run the real engine server for the UI tests. */

import { spawn, ChildProcess } from "node:child_process";

export const BASE_URL = "http://127.0.0.1:8799";

let child: ChildProcess | null = null;

async function waitReady(url: string, timeoutMs = 45_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${url}/api/meta`);
      if (response.ok) return;
    } catch (err) {
      lastError = err;
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error(`engine server did not come up at ${url}: ${String(lastError)}`);
}

export async function setup(): Promise<void> {
  child = spawn(
    "python3",
    [
      "-m", "metricnav.cli", "serve",
      "--seed", "42",
      "--span", "2019-01-01..2020-08-27",
      "--ref-date", "2020-08-27",
      "--port", "8799",
    ],
    { stdio: "ignore" },
  );
  child.on("exit", (code) => {
    if (code !== null && code !== 0) {
      // surfaced by waitReady timing out
    }
  });
  await waitReady(BASE_URL);
}

export async function teardown(): Promise<void> {
  if (child && !child.killed) {
    child.kill("SIGTERM");
  }
}
