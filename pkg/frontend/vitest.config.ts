import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    environmentOptions: {
      happyDOM: {
        // the UI is served from the engine's origin in production; tests
        // run the page on that origin so plain fetches stay same-origin
        url: "http://127.0.0.1:8799",
      },
    },
    globalSetup: "./test/server.ts",
    include: ["test/**/*.test.ts"],
    testTimeout: 30_000,
    hookTimeout: 60_000,
  },
});
