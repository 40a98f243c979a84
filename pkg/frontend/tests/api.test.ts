import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api";
import { FakeServer } from "./fakeserver";
import { figAnnotated, figSentence } from "./helpers";

let server: FakeServer;
let client: ApiClient;

beforeEach(() => {
  server = new FakeServer();
  server.addAnnotator("ayse", "pw");
  server.addTreebank("tb", [figSentence()]);
  client = new ApiClient("", server.fetch);
});

describe("ApiClient", () => {
  it("logs in and stores the token", async () => {
    const out = await client.login("ayse", "pw");
    expect(out.annotator_id).toBe("ayse");
    expect(client.token).toBe(out.token);
  });

  it("raises ApiError with the envelope on failures", async () => {
    await expect(client.login("ayse", "wrong")).rejects.toMatchObject({
      status: 401,
      code: "BAD_CREDENTIALS",
    });
  });

  it("sends the bearer token on subsequent requests", async () => {
    await expect(client.listTreebanks()).rejects.toMatchObject({ status: 401 });
    await client.login("ayse", "pw");
    const { items } = await client.listTreebanks();
    expect(items.map((t) => t.id)).toEqual(["tb"]);
  });

  it("gets a virtual record and saves with optimistic concurrency", async () => {
    await client.login("ayse", "pw");
    const rec = await client.getSentence("tb", "fig1");
    expect(rec.revision).toBe(0);
    expect(rec.status).toBe("New");
    expect(rec.issues.some((i) => i.code === "UNSET_FIELD")).toBe(true);

    const saved = await client.putSentence("tb", "fig1", {
      sentence: figAnnotated(),
      status: "Draft",
      note: "",
      expected_revision: 0,
    });
    expect(saved.revision).toBe(1);
    expect(saved.issues).toEqual([]);

    await expect(
      client.putSentence("tb", "fig1", {
        sentence: figAnnotated(),
        status: "Draft",
        note: "",
        expected_revision: 0,
      }),
    ).rejects.toMatchObject({ status: 409, code: "REVISION_CONFLICT" });
  });

  it("surfaces complete-with-errors with the issue list", async () => {
    await client.login("ayse", "pw");
    try {
      await client.putSentence("tb", "fig1", {
        sentence: figSentence(),
        status: "Complete",
        note: "",
        expected_revision: 0,
      });
      expect.unreachable();
    } catch (err) {
      const e = err as ApiError;
      expect(e.status).toBe(422);
      expect(e.code).toBe("COMPLETE_WITH_ERRORS");
      const issues = e.details["issues"] as { code: string }[];
      expect(issues.some((i) => i.code === "UNSET_FIELD")).toBe(true);
    }
  });

  it("fetches layout geometry", async () => {
    await client.login("ayse", "pw");
    await client.putSentence("tb", "fig1", {
      sentence: figAnnotated(), status: "Draft", note: "", expected_revision: 0,
    });
    const diagram = await client.layout("tb", "fig1", "arcs_horizontal");
    expect(diagram.nodes).toHaveLength(7);
    expect(diagram.edges).toHaveLength(7);
    const root = diagram.edges.find((e) => e.head_id === 0);
    expect(root?.dep_id).toBe(4);
  });

  it("splits and joins through the API", async () => {
    await client.login("ayse", "pw");
    const joined = await client.join("tb", "fig1", 4, 5);
    expect(joined.sentence.tokens.map((t) => t.form)).toEqual([
      "Sel", "sularında", "neler", "yoktu", "ki", "...",
    ]);
    expect(joined.sentence.mwts).toEqual([]);
    const split = await client.split("tb", "fig1", 4, ["yok", "tu"], joined.revision);
    expect(split.sentence.tokens).toHaveLength(7);
    expect(split.sentence.mwts[0].form).toBe("yoktu");
  });

  it("searches the annotator layer", async () => {
    await client.login("ayse", "pw");
    const page = await client.search("tb", "form=sularında");
    expect(page.total).toBe(1);
    expect(page.items[0]).toMatchObject({ sent_id: "fig1", token_id: 2 });
    await expect(client.search("tb", "upos=")).rejects.toMatchObject({
      code: "QUERY_SYNTAX",
    });
  });

  it("fetches the vocabulary bundle", async () => {
    await client.login("ayse", "pw");
    const vocab = await client.vocabulary("tb");
    expect(vocab.upos).toHaveLength(17);
    expect(vocab.deprel).toContain("root");
  });
});
