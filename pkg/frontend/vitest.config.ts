import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    testTimeout: 60_000,
    hookTimeout: 60_000,
    // the e2e suite spawns one backend per file; keep files sequential
    fileParallelism: false,
  },
});
