import { ApiClient } from "./api";
import { clear, el } from "./dom";
import { addCategoryPage } from "./pages/addCategory";
import { categoryPage } from "./pages/category";
import { overviewPage } from "./pages/overview";

/** Hash-routed shell: sidebar with overview, one link per category, and
 * the add-category page. */
export function createApp(api: ApiClient, root: HTMLElement): { navigate: (hash: string) => void } {
  const sidebar = el("nav", { class: "sidebar" });
  const outlet = el("main", { class: "outlet" });

  async function renderSidebar(): Promise<void> {
    const categories = api.token ? await api.listCategories() : [];
    clear(sidebar);
    sidebar.append(
      el("h1", {}, "modkit"),
      el("a", { href: "#/" }, "Overview"),
      ...categories.map((c) => el("a", { href: `#/category/${c.category_id}`, class: "category-link" }, c.name)),
      el("a", { href: "#/add", class: "add-link" }, "+ Add New Category"),
      el("a", { href: "#/logout", class: "logout" }, "log out"),
    );
  }

  function loginPage(): HTMLElement {
    const nameInput = el("input", { type: "text", placeholder: "Channel name" }) as HTMLInputElement;
    const apiInput = el("input", { type: "text", placeholder: "API base URL (blank = same origin)" }) as HTMLInputElement;
    apiInput.value = localStorage.getItem("modkit.api") ?? "";
    const status = el("div", { class: "status" });
    return el(
      "div",
      { class: "page login" },
      el("h2", {}, "Sign in"),
      el("p", { class: "hint" }, "Stub login: enter your channel name. Platform OAuth would attach here."),
      nameInput,
      apiInput,
      el("button", {
        class: "primary",
        onclick: async () => {
          try {
            api.baseUrl = apiInput.value.trim().replace(/\/$/, "");
            const session = await api.login(nameInput.value.trim());
            api.token = session.token;
            localStorage.setItem("modkit.token", session.token);
            localStorage.setItem("modkit.api", api.baseUrl);
            navigate("#/");
          } catch (error: any) {
            status.textContent = `${error.code ?? "Error"}: ${error.message ?? error}`;
          }
        },
      }, "Log in"),
      status,
    );
  }

  function route(): void {
    const hash = window.location.hash || "#/";
    clear(outlet);
    if (!api.token) {
      outlet.append(loginPage());
      return;
    }
    if (hash === "#/logout") {
      api.token = null;
      localStorage.removeItem("modkit.token");
      window.location.hash = "#/";
      clear(outlet);
      outlet.append(loginPage());
      return;
    }
    if (hash.startsWith("#/category/")) {
      outlet.append(categoryPage(api, hash.slice("#/category/".length)));
    } else if (hash === "#/add") {
      outlet.append(
        addCategoryPage(api, (id) => {
          void renderSidebar();
          navigate(`#/category/${id}`);
        }),
      );
    } else {
      outlet.append(overviewPage(api));
    }
    void renderSidebar();
  }

  function navigate(hash: string): void {
    if (window.location.hash === hash) {
      route();
    } else {
      window.location.hash = hash;
    }
  }

  window.addEventListener("hashchange", route);
  root.append(sidebar, outlet);
  route();
  return { navigate };
}
