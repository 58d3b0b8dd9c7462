#include <algorithm>

#include "doctest.h"
#include "domforge/corpus.hpp"
#include "domforge/syntax.hpp"
#include "domforge/util.hpp"

using namespace domforge;
using namespace domforge::syntax;

namespace {

const std::string kFixtures = DOMFORGE_FIXTURES_DIR;

LibrarySpec gin_spec() {
    return corpus::load_library_spec(kFixtures + "/gin_spec.json");
}
LibrarySpec cocos_spec() {
    return corpus::load_library_spec(kFixtures + "/cocos_spec.json");
}

std::vector<std::string> api_names(const SyntaxTree& tree, const FunctionSpan& fn,
                                   const LibrarySpec& lib) {
    auto vars = collect_typed_variables(tree, fn, lib);
    std::vector<std::string> names;
    for (const ApiCall& call : extract_api_calls(tree, fn, lib, vars))
        names.push_back(call.qualified_name);
    return names;
}

}  // namespace

TEST_SUITE("syntax") {

TEST_CASE("single go function parses") {
    SyntaxTree tree = parse_source("package p\n\nfunc f() {}\n", Language::Go);
    auto fns = extract_functions(tree);
    REQUIRE(fns.size() == 1);
    CHECK(fns[0].name == "f");
    CHECK(tree.text_of(fns[0].signature_span) == "func f()");
    CHECK(tree.text_of(fns[0].body_span) == "{}");
}

TEST_CASE("empty source yields zero functions") {
    SyntaxTree tree = parse_source("", Language::Go);
    CHECK(extract_functions(tree).empty());
}

TEST_CASE("go func and method both extracted; closure is not") {
    std::string src =
        "package p\n\n"
        "func Free(a int) int {\n\treturn a\n}\n\n"
        "func (s *Server) Handle(w io.Writer) {\n"
        "\tgo func() {\n\t\ts.log(w)\n\t}()\n"
        "}\n";
    SyntaxTree tree = parse_source(src, Language::Go);
    auto fns = extract_functions(tree);
    REQUIRE(fns.size() == 2);
    CHECK(fns[0].name == "Free");
    CHECK(fns[1].name == "Handle");
    REQUIRE(fns[1].receiver.has_value());
    CHECK(fns[1].receiver->var_name == "s");
    CHECK(fns[1].receiver->type_text == "*Server");
    REQUIRE(fns[1].params.size() == 1);
    CHECK(fns[1].params[0].var_name == "w");
    CHECK(fns[1].params[0].type_text == "io.Writer");
}

TEST_CASE("cpp free function and out-of-line method") {
    std::string src =
        "#include \"x.h\"\n\n"
        "int add(int a, int b) {\n    return a + b;\n}\n\n"
        "void Widget::reset(float scale) {\n    scale_ = scale;\n}\n";
    SyntaxTree tree = parse_source(src, Language::Cpp);
    auto fns = extract_functions(tree);
    REQUIRE(fns.size() == 2);
    CHECK(fns[0].name == "add");
    CHECK(fns[0].qualified_name == "add");
    CHECK(fns[1].name == "reset");
    CHECK(fns[1].qualified_name == "Widget::reset");
    CHECK(tree.text_of(fns[1].signature_span) == "void Widget::reset(float scale)");
}

TEST_CASE("signature plus separator plus body reconstructs the source span") {
    std::string src = util::read_file(kFixtures + "/repos/go-webapp-alpha/routes.go");
    SyntaxTree tree = parse_source(src, Language::Go);
    auto fns = extract_functions(tree);
    REQUIRE(!fns.empty());
    for (const FunctionSpan& fn : fns) {
        std::string whole(tree.text_of({fn.signature_span.begin, fn.body_span.end}));
        std::string sig(tree.text_of(fn.signature_span));
        std::string sep(tree.text_of({fn.signature_span.end, fn.body_span.begin}));
        std::string body(tree.text_of(fn.body_span));
        CHECK(sig + sep + body == whole);
        CHECK(body.front() == '{');
        CHECK(body.back() == '}');
    }
}

TEST_CASE("mid-file syntax error does not lose later functions") {
    std::string src =
        "package p\n\n"
        "func Good1() {\n\tx := 1\n\t_ = x\n}\n\n"
        "func broken(a int {\n\n"
        "func Good2() {\n\ty := 2\n\t_ = y\n}\n";
    SyntaxTree tree = parse_source(src, Language::Go);
    auto fns = extract_functions(tree);
    std::vector<std::string> names;
    for (const auto& fn : fns) names.push_back(fn.name);
    CHECK(std::find(names.begin(), names.end(), "Good1") != names.end());
    CHECK(std::find(names.begin(), names.end(), "Good2") != names.end());
    CHECK(error_region_count(tree) >= 1);
}

TEST_CASE("typed variables from params, var decls and factory map") {
    LibrarySpec lib = gin_spec();
    std::string src =
        "package p\n\n"
        "import \"github.com/gin-gonic/gin\"\n\n"
        "func Routes(r *gin.Engine) {\n"
        "\tvar count int\n"
        "\tc, _ := gin.CreateTestContext(w)\n"
        "\t_ = count\n"
        "\t_ = c\n"
        "}\n";
    SyntaxTree tree = parse_source(src, Language::Go);
    auto fns = extract_functions(tree);
    REQUIRE(fns.size() == 1);
    auto vars = collect_typed_variables(tree, fns[0], lib);
    auto find_type = [&](const std::string& name) -> std::string {
        for (const TypedVar& var : vars)
            if (var.var_name == name) return var.type_text;
        return "";
    };
    CHECK(find_type("r") == "*gin.Engine");
    CHECK(find_type("count") == "int");
    CHECK(find_type("c") == "*gin.Context");
}

TEST_CASE("cpp local declarations and auto factories") {
    LibrarySpec lib = cocos_spec();
    std::string src =
        "#include \"cocos2d.h\"\n\n"
        "void build() {\n"
        "    cocos2d::Sprite* s = cocos2d::Sprite::create(\"a.png\");\n"
        "    auto d = Director::getInstance();\n"
        "    s->setScale(1.0f);\n"
        "    d->end();\n"
        "}\n";
    SyntaxTree tree = parse_source(src, Language::Cpp);
    auto fns = extract_functions(tree);
    REQUIRE(fns.size() == 1);
    auto vars = collect_typed_variables(tree, fns[0], lib);
    auto find_type = [&](const std::string& name) -> std::string {
        for (const TypedVar& var : vars)
            if (var.var_name == name) return var.type_text;
        return "";
    };
    CHECK(find_type("s") == "cocos2d::Sprite*");
    CHECK(find_type("d") == "cocos2d::Director*");
    auto names = api_names(tree, fns[0], lib);
    std::vector<std::string> want = {"cocos2d.Sprite.create", "cocos2d.Director.getInstance",
                                     "cocos2d.Sprite.setScale", "cocos2d.Director.end"};
    CHECK(names == want);
}

TEST_CASE("targeted variable calls use receiver type") {
    LibrarySpec lib = gin_spec();
    std::string src =
        "package p\n\n"
        "import \"github.com/gin-gonic/gin\"\n\n"
        "func HandleGetRequest(c *gin.Context) {\n"
        "\tparam := c.Query(\"param\")\n"
        "\t_ = param\n"
        "}\n";
    SyntaxTree tree = parse_source(src, Language::Go);
    auto fns = extract_functions(tree);
    REQUIRE(fns.size() == 1);
    auto vars = collect_typed_variables(tree, fns[0], lib);
    auto calls = extract_api_calls(tree, fns[0], lib, vars);
    REQUIRE(calls.size() == 1);
    CHECK(calls[0].qualified_name == "gin.Context.Query");
    REQUIRE(calls[0].receiver_var.has_value());
    CHECK(*calls[0].receiver_var == "c");
    // containment: call inside statement inside body
    CHECK(fns[0].body_span.contains(calls[0].stmt_span));
    CHECK(calls[0].stmt_span.contains(calls[0].call_span));
}

TEST_CASE("router group versus GET stay distinct") {
    LibrarySpec lib = gin_spec();
    std::string src =
        "package p\n\n"
        "import \"github.com/gin-gonic/gin\"\n\n"
        "func RegisterRouter(router *gin.RouterGroup) {\n"
        "\tapi := router.Group(\"/api\")\n"
        "\tapi.GET(\"/items\", nil)\n"
        "}\n";
    SyntaxTree tree = parse_source(src, Language::Go);
    auto fns = extract_functions(tree);
    REQUIRE(fns.size() == 1);
    auto names = api_names(tree, fns[0], lib);
    std::vector<std::string> want = {"gin.RouterGroup.Group", "gin.RouterGroup.GET"};
    CHECK(names == want);
}

TEST_CASE("chained calls each become an api call") {
    LibrarySpec lib = gin_spec();
    std::string src =
        "package p\n\n"
        "import \"github.com/gin-gonic/gin\"\n\n"
        "func SetupRoutes(e *gin.Engine) {\n"
        "\te.Group(\"/v1\").Use(gin.Logger())\n"
        "}\n";
    SyntaxTree tree = parse_source(src, Language::Go);
    auto fns = extract_functions(tree);
    REQUIRE(fns.size() == 1);
    auto vars = collect_typed_variables(tree, fns[0], lib);
    auto calls = extract_api_calls(tree, fns[0], lib, vars);
    REQUIRE(calls.size() == 3);
    CHECK(calls[0].qualified_name == "gin.Engine.Group");
    CHECK(calls[1].qualified_name == "gin.RouterGroup.Use");
    CHECK(calls[2].qualified_name == "gin.Logger");
    // chain shares the statement span
    CHECK(calls[0].stmt_span == calls[1].stmt_span);
    // ordering by span start, then end
    CHECK(calls[0].call_span.begin == calls[1].call_span.begin);
    CHECK(calls[0].call_span.end < calls[1].call_span.end);
}

TEST_CASE("no library calls yields empty list") {
    LibrarySpec lib = gin_spec();
    std::string src = "package p\n\nfunc plain(a int) int {\n\tb := a + 1\n\treturn b\n}\n";
    SyntaxTree tree = parse_source(src, Language::Go);
    auto fns = extract_functions(tree);
    REQUIRE(fns.size() == 1);
    CHECK(api_names(tree, fns[0], lib).empty());
}

TEST_CASE("uses_library checks import scope only") {
    LibrarySpec gin = gin_spec();
    CHECK(uses_library("package p\n\nimport \"github.com/gin-gonic/gin\"\n", gin));
    CHECK(uses_library(
        "package p\n\nimport (\n\t\"fmt\"\n\n\t\"github.com/gin-gonic/gin\"\n)\n", gin));
    CHECK_FALSE(uses_library(
        "package p\n\nfunc f() string { return \"github.com/gin-gonic/gin\" }\n", gin));

    LibrarySpec cocos = cocos_spec();
    CHECK(uses_library("#include \"cocos2d.h\"\n", cocos));
    CHECK(uses_library("#include <cocos2d.h>\n", cocos));
    CHECK_FALSE(uses_library("// mentions cocos2d.h only in a comment\nint x;\n", cocos));
}

TEST_CASE("reparsing identical text is stable") {
    std::string src = util::read_file(kFixtures + "/repos/cpp-game-gamma/scene.cpp");
    LibrarySpec lib = cocos_spec();
    SyntaxTree t1 = parse_source(src, Language::Cpp);
    SyntaxTree t2 = parse_source(src, Language::Cpp);
    auto f1 = extract_functions(t1);
    auto f2 = extract_functions(t2);
    REQUIRE(f1.size() == f2.size());
    for (std::size_t i = 0; i < f1.size(); ++i) {
        CHECK(api_names(t1, f1[i], lib) == api_names(t2, f2[i], lib));
    }
}

}
