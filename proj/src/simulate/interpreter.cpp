/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "halgen/simulate/interpreter.hpp"

#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "halgen/analysis/symbols.hpp"
#include "halgen/error.hpp"

namespace halgen {
namespace {

using ast::BaseType;
using ast::CType;

struct Abort {};

struct Val {
    std::uint32_t bits = 0;
    CType type{BaseType::I32, 0, false};
};

struct Var {
    std::uint32_t addr = 0;
    CType type;
};

constexpr CType kI32{BaseType::I32, 0, false};
constexpr CType kU32{BaseType::U32, 0, false};
constexpr CType kVoid{BaseType::Void, 0, false};
constexpr std::uint32_t kStackBase = kRamBase + kRamSize / 2;

bool is_void(const CType& t) { return !t.is_pointer() && t.base == BaseType::Void; }

unsigned scalar_size(BaseType b) {
    switch (b) {
        case BaseType::U8: return 1;
        case BaseType::U16: return 2;
        case BaseType::Void: return 1;
        default: return 4;
    }
}

unsigned width_of(const CType& t) { return t.is_pointer() ? 4 : scalar_size(t.base); }

CType pointee(CType t) {
    --t.pointer_depth;
    return t;
}

unsigned pointee_size(const CType& t) { return width_of(pointee(t)); }

std::uint32_t truncate(std::uint32_t bits, const CType& t) {
    switch (width_of(t)) {
        case 1: return bits & 0xFFu;
        case 2: return bits & 0xFFFFu;
        default: return bits;
    }
}

CType promote(const CType& t) {
    if (t.is_pointer()) return CType{t.base, t.pointer_depth, false};
    if (t.base == BaseType::U32) return kU32;
    if (t.base == BaseType::Void) return kVoid;
    return kI32;
}

std::string hex(std::uint32_t v) {
    char buf[11];
    std::snprintf(buf, sizeof buf, "0x%08X", v);
    return buf;
}

ast::BinaryOp binop_of(ast::AssignOp op) {
    switch (op) {
        case ast::AssignOp::And: return ast::BinaryOp::BitAnd;
        case ast::AssignOp::Or: return ast::BinaryOp::BitOr;
        case ast::AssignOp::Xor: return ast::BinaryOp::BitXor;
        case ast::AssignOp::Shl: return ast::BinaryOp::Shl;
        case ast::AssignOp::Shr: return ast::BinaryOp::Shr;
        case ast::AssignOp::Add: return ast::BinaryOp::Add;
        case ast::AssignOp::Sub: return ast::BinaryOp::Sub;
        case ast::AssignOp::Assign: break;
    }
    return ast::BinaryOp::Add;
}

struct RegInfo {
    const PeripheralDef* peripheral;
    const RegisterDef* reg;
};

struct Script {
    std::string peripheral;
    unsigned pin;
    std::vector<std::uint8_t> values;
    std::size_t next = 0;
};

class Machine {
public:
    Machine(const Project& project, const BoardMap& board, const Scenario& scenario, const ExecOptions& options)
        : board_(board), scenario_(scenario), options_(options), ram_(kRamSize, 0) {
        for (const auto& unit : project.units) {
            for (const auto& item : unit.items) {
                if (const auto* fn = item.as<ast::FunctionDef>()) functions_[fn->name] = fn;
                if (const auto* m = item.as<ast::MacroConst>()) macros_[m->name] = m->value.get();
                if (const auto* g = item.as<ast::GlobalDecl>()) global_decls_.push_back({g, item.span});
            }
        }
        for (const auto& p : board_.peripherals) {
            for (const auto& r : p.registers) {
                const std::uint32_t addr = p.base_address + r.offset;
                regs_[addr] = {&p, &r};
                mmio_[addr] = r.reset_value;
            }
        }
        for (std::size_t i = 0; i < scenario_.register_presets.size(); ++i) {
            const auto [addr, value] = scenario_.register_presets[i];
            if (!regs_.count(addr)) {
                throw ConfigError("register_presets[" + std::to_string(i) + "].address",
                                  hex(addr) + " is not a mapped register");
            }
            mmio_[addr] = value;
        }
        for (const auto& [key, values] : scenario_.gpio_inputs) {
            const auto* p = board_.find_peripheral(key.first);
            const std::string field = "gpio_inputs." + key.first + "." + std::to_string(key.second);
            if (!p) throw ConfigError(field, "unknown peripheral '" + key.first + "'");
            bool has_idr = false;
            for (const auto& r : p->registers) has_idr = has_idr || r.behavior == RegisterBehavior::GpioIdr;
            if (!has_idr) throw ConfigError(field, "peripheral '" + key.first + "' has no gpio_idr register");
            scripts_.push_back({key.first, key.second, values});
        }
    }

    MachineState run(const ast::FunctionDef& main_fn, const SourceSpan& main_span) {
        MachineState st;
        try {
            for (const auto& [decl, span] : global_decls_) {
                const std::uint32_t addr = global_top_;
                global_top_ += 4;
                if (global_top_ > kStackBase) fatal("too many globals", span);
                const Var var{addr, decl->type};
                store(var, decl->init ? eval(*decl->init) : Val{0, decl->type}, span);
                globals_[decl->name] = var;
            }
            call_function(main_fn.name, {}, main_span);
            st.finished = true;
        } catch (const Abort&) {
        }
        for (const auto& [name, var] : globals_) st.globals[name] = ram_load(var.addr, width_of(var.type));
        st.mmio = mmio_;
        st.usart_log = log_;
        st.steps_used = steps_;
        st.fuel = scenario_.fuel_limit - steps_;
        st.diagnostics = std::move(diagnostics_);
        return st;
    }

private:
    //=== diagnostics and fuel ===//

    void diag(Severity severity, std::string message, const SourceSpan* span) {
        diagnostics_.push_back({severity, std::move(message), span ? span->location() : std::string()});
    }

    [[noreturn]] void fatal(std::string message, const SourceSpan& span) {
        diag(Severity::Error, std::move(message), &span);
        throw Abort{};
    }

    void tick(const SourceSpan& span) {
        if (steps_ >= scenario_.fuel_limit) fatal("fuel exhausted", span);
        ++steps_;
    }

    //=== memory ===//

    std::uint32_t ram_load(std::uint32_t addr, unsigned width) const {
        std::uint32_t v = 0;
        for (unsigned i = 0; i < width; ++i) v |= std::uint32_t{ram_[addr - kRamBase + i]} << (8 * i);
        return v;
    }

    void ram_store(std::uint32_t addr, unsigned width, std::uint32_t v) {
        for (unsigned i = 0; i < width; ++i) ram_[addr - kRamBase + i] = static_cast<std::uint8_t>(v >> (8 * i));
    }

    bool in_ram(std::uint32_t addr, unsigned width) const {
        return addr >= kRamBase && std::uint64_t{addr} - kRamBase + width <= kRamSize;
    }

    const RegInfo& decode(std::uint32_t addr, unsigned width, const SourceSpan& span) {
        const auto* p = board_.peripheral_at(addr);
        if (!p) fatal("wild-address access at " + hex(addr), span);
        const std::uint32_t reg_addr = addr & ~3u;
        const auto it = regs_.find(reg_addr);
        if (it == regs_.end() || (addr - reg_addr) + width > 4) {
            fatal("unmapped register access at " + hex(addr) + " in " + p->name, span);
        }
        check_clock(*p, span);
        return it->second;
    }

    void check_clock(const PeripheralDef& p, const SourceSpan& span) {
        if (!p.clock_enable) return;
        const auto* owner = board_.find_peripheral(p.clock_enable->peripheral);
        const auto* reg = owner->find_register(p.clock_enable->register_name);
        if ((mmio_[owner->base_address + reg->offset] >> p.clock_enable->bit) & 1u) return;
        if (!unclocked_.insert(p.name).second) return;
        diag(options_.strict ? Severity::Error : Severity::Warning,
             "access to " + p.name + " while its clock is disabled (" + owner->name + "." + reg->name + " bit " +
                 std::to_string(p.clock_enable->bit) + " clear)",
             &span);
    }

    std::uint32_t register_read(std::uint32_t reg_addr, const RegInfo& info) {
        std::uint32_t v = mmio_[reg_addr];
        switch (info.reg->behavior) {
            case RegisterBehavior::UsartSr: return v | 0x80u;  // transmitter always ready
            case RegisterBehavior::GpioIdr:
                for (auto& s : scripts_) {
                    if (s.peripheral != info.peripheral->name) continue;
                    const auto bit = s.values[std::min(s.next, s.values.size() - 1)];
                    if (s.next < s.values.size()) ++s.next;
                    v = bit ? (v | (1u << s.pin)) : (v & ~(1u << s.pin));
                }
                return v;
            default: return v;
        }
    }

    void register_write(std::uint32_t reg_addr, const RegInfo& info, std::uint32_t v, const SourceSpan& span) {
        mmio_[reg_addr] = v;
        if (info.reg->behavior != RegisterBehavior::UsartDr) return;
        if (options_.strict) {
            if (const auto* cr1 = info.peripheral->find_register("CR1");
                cr1 && !(mmio_[info.peripheral->base_address + cr1->offset] & 0x8u)) {
                if (dropped_.insert(info.peripheral->name).second) {
                    diag(Severity::Warning, info.peripheral->name + " transmitter disabled (CR1.TE clear); byte dropped",
                         &span);
                }
                return;
            }
        }
        log_.push_back(static_cast<char>(v & 0xFFu));
    }

    std::uint32_t read(std::uint32_t addr, unsigned width, const SourceSpan& span) {
        if (in_ram(addr, width)) return ram_load(addr, width);
        const RegInfo& info = decode(addr, width, span);
        const std::uint32_t reg_addr = addr & ~3u;
        const unsigned lane = addr - reg_addr;
        const std::uint32_t full = register_read(reg_addr, info);
        const std::uint32_t mask = width == 4 ? 0xFFFFFFFFu : ((1u << (8 * width)) - 1);
        return (full >> (8 * lane)) & mask;
    }

    void write(std::uint32_t addr, unsigned width, std::uint32_t v, const SourceSpan& span) {
        if (in_ram(addr, width)) return ram_store(addr, width, v);
        const RegInfo& info = decode(addr, width, span);
        const std::uint32_t reg_addr = addr & ~3u;
        const unsigned lane = addr - reg_addr;
        const std::uint32_t mask = (width == 4 ? 0xFFFFFFFFu : ((1u << (8 * width)) - 1)) << (8 * lane);
        const std::uint32_t merged = (mmio_[reg_addr] & ~mask) | ((v << (8 * lane)) & mask);
        register_write(reg_addr, info, merged, span);
    }

    Val load(const Var& var, const SourceSpan& span) {
        if (is_void(var.type)) fatal("dereference of a void pointer", span);
        return {read(var.addr, width_of(var.type), span), var.type};
    }

    Val store(const Var& var, const Val& v, const SourceSpan& span) {
        const Val c = convert(v, var.type, span);
        write(var.addr, width_of(var.type), c.bits, span);
        return c;
    }

    std::uint32_t alloc(const SourceSpan& span) {
        if (sp_ + 4 > kRamBase + kRamSize) fatal("stack overflow", span);
        const std::uint32_t addr = sp_;
        sp_ += 4;
        return addr;
    }

    //=== values ===//

    Val convert(const Val& v, const CType& to, const SourceSpan& span) {
        if (is_void(to)) return {0, kVoid};
        if (is_void(v.type)) fatal("void value used", span);
        return {truncate(v.bits, to), to};
    }

    bool truthy(const Val& v, const SourceSpan& span) {
        if (is_void(v.type)) fatal("void value used as a condition", span);
        return v.bits != 0;
    }

    Val arith(ast::BinaryOp op, const Val& l, const Val& r, const SourceSpan& span) {
        using B = ast::BinaryOp;
        if (is_void(l.type) || is_void(r.type)) fatal("void value used in an expression", span);
        const bool lp = l.type.is_pointer();
        const bool rp = r.type.is_pointer();
        auto boolean = [](bool b) { return Val{b ? 1u : 0u, kI32}; };
        if (lp || rp) {
            switch (op) {
                case B::Add:
                    if (lp && rp) fatal("cannot add two pointers", span);
                    if (lp) return {l.bits + r.bits * pointee_size(l.type), promote(l.type)};
                    return {r.bits + l.bits * pointee_size(r.type), promote(r.type)};
                case B::Sub:
                    if (lp && rp) {
                        const auto diff = static_cast<std::int32_t>(l.bits - r.bits);
                        return {static_cast<std::uint32_t>(diff / static_cast<std::int32_t>(pointee_size(l.type))), kI32};
                    }
                    if (lp) return {l.bits - r.bits * pointee_size(l.type), promote(l.type)};
                    fatal("cannot subtract a pointer from an integer", span);
                case B::Eq: return boolean(l.bits == r.bits);
                case B::Ne: return boolean(l.bits != r.bits);
                case B::Lt: return boolean(l.bits < r.bits);
                case B::Gt: return boolean(l.bits > r.bits);
                case B::Le: return boolean(l.bits <= r.bits);
                case B::Ge: return boolean(l.bits >= r.bits);
                default: fatal("invalid pointer operand to '" + std::string(ast::to_string(op)) + "'", span);
            }
        }
        const CType lt = promote(l.type);
        const CType rt = promote(r.type);
        const bool is_signed = lt.base == BaseType::I32 && rt.base == BaseType::I32;
        const CType ct = is_signed ? kI32 : kU32;
        const auto sl = static_cast<std::int32_t>(l.bits);
        const auto sr = static_cast<std::int32_t>(r.bits);
        switch (op) {
            case B::Add: return {l.bits + r.bits, ct};
            case B::Sub: return {l.bits - r.bits, ct};
            case B::Mul: return {l.bits * r.bits, ct};
            case B::Div:
            case B::Mod: {
                if (r.bits == 0) fatal("division by zero", span);
                if (!is_signed) return {op == B::Div ? l.bits / r.bits : l.bits % r.bits, ct};
                if (sl == std::numeric_limits<std::int32_t>::min() && sr == -1) {
                    return {op == B::Div ? l.bits : 0u, ct};
                }
                return {static_cast<std::uint32_t>(op == B::Div ? sl / sr : sl % sr), ct};
            }
            case B::Shl:
            case B::Shr: {
                // Out-of-range counts are reported once per site and yield 0 (or
                // all ones for a negative signed operand) so a runaway loop still
                // ends in fuel exhaustion.
                const bool negative = rt.base == BaseType::I32 && sr < 0;
                if (negative || r.bits >= 32) {
                    if (shift_sites_.insert(span.location()).second) {
                        diag(Severity::Error,
                             negative ? "negative shift count " + std::to_string(sr)
                                      : "shift count " + std::to_string(r.bits) + " >= 32",
                             &span);
                    }
                    const bool fill = op == B::Shr && lt.base == BaseType::I32 && sl < 0;
                    return {fill ? 0xFFFFFFFFu : 0u, lt};
                }
                if (op == B::Shl) return {l.bits << r.bits, lt};
                if (lt.base == BaseType::I32) return {static_cast<std::uint32_t>(sl >> r.bits), lt};
                return {l.bits >> r.bits, lt};
            }
            case B::BitAnd: return {l.bits & r.bits, ct};
            case B::BitOr: return {l.bits | r.bits, ct};
            case B::BitXor: return {l.bits ^ r.bits, ct};
            case B::Eq: return boolean(l.bits == r.bits);
            case B::Ne: return boolean(l.bits != r.bits);
            case B::Lt: return boolean(is_signed ? sl < sr : l.bits < r.bits);
            case B::Gt: return boolean(is_signed ? sl > sr : l.bits > r.bits);
            case B::Le: return boolean(is_signed ? sl <= sr : l.bits <= r.bits);
            case B::Ge: return boolean(is_signed ? sl >= sr : l.bits >= r.bits);
            case B::LogAnd:
            case B::LogOr: break;
        }
        fatal("unsupported operator", span);
    }

    //=== names ===//

    const Var* find_var(const std::string& name) const {
        if (!frames_.empty() && macro_depth_ == 0) {
            const auto& scopes = frames_.back().scopes;
            for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
                if (auto v = it->find(name); v != it->end()) return &v->second;
            }
        }
        if (auto g = globals_.find(name); g != globals_.end()) return &g->second;
        return nullptr;
    }

    Val macro_value(const std::string& name, const ast::Expr& body, const SourceSpan& span) {
        if (!expanding_.insert(name).second) fatal("recursive macro '" + name + "'", span);
        ++macro_depth_;
        const Val v = eval(body);
        --macro_depth_;
        expanding_.erase(name);
        return v;
    }

    //=== expressions ===//

    Var location(const ast::Expr& e) {
        tick(e.span);
        if (const auto* id = e.as<ast::Ident>()) {
            if (const Var* v = find_var(id->name)) return *v;
            fatal("'" + id->name + "' is not assignable", e.span);
        }
        if (const auto* p = e.as<ast::Paren>()) return location(*p->inner);
        if (const auto* u = e.as<ast::Unary>(); u && u->op == ast::UnaryOp::Deref) return deref(*u->operand, e.span);
        fatal("expression is not assignable", e.span);
    }

    Var deref(const ast::Expr& operand, const SourceSpan& span) {
        const Val p = eval(operand);
        if (!p.type.is_pointer()) fatal("dereference of a non-pointer value", span);
        return {p.bits, pointee(p.type)};
    }

    Val eval(const ast::Expr& e) {
        tick(e.span);
        return std::visit(ast::overloaded{
                              [&](const ast::Ident& id) { return eval_ident(id, e.span); },
                              [&](const ast::IntLit& lit) { return eval_literal(lit, e.span); },
                              [&](const ast::Unary& u) { return eval_unary(u, e.span); },
                              [&](const ast::Binary& b) { return eval_binary(b, e.span); },
                              [&](const ast::Assign& a) { return eval_assign(a, e.span); },
                              [&](const ast::Call& c) {
                                  std::vector<Val> args;
                                  for (const auto& arg : c.args) args.push_back(eval(*arg));
                                  return call_function(c.callee, args, e.span);
                              },
                              [&](const ast::Cast& c) {
                                  const Val v = eval(*c.operand);
                                  if (is_void(c.type)) return Val{0, kVoid};
                                  return convert(v, c.type, e.span);
                              },
                              [&](const ast::Paren& p) { return eval(*p.inner); },
                          },
                          e.node);
    }

    Val eval_ident(const ast::Ident& id, const SourceSpan& span) {
        if (const Var* v = find_var(id.name)) return load(*v, span);
        if (auto m = macros_.find(id.name); m != macros_.end()) return macro_value(id.name, *m->second, span);
        if (functions_.count(id.name)) fatal("function '" + id.name + "' used as a value", span);
        fatal("undefined identifier '" + id.name + "'", span);
    }

    Val eval_literal(const ast::IntLit& lit, const SourceSpan& span) {
        if (lit.value > 0xFFFFFFFFULL) fatal("integer literal " + lit.spelling + " does not fit in 32 bits", span);
        const bool unsigned_suffix = lit.spelling.find_first_of("uU") != std::string::npos;
        const auto bits = static_cast<std::uint32_t>(lit.value);
        return {bits, unsigned_suffix || bits > 0x7FFFFFFFu ? kU32 : kI32};
    }

    Val eval_unary(const ast::Unary& u, const SourceSpan& span) {
        using U = ast::UnaryOp;
        switch (u.op) {
            case U::Deref: return load(deref(*u.operand, span), span);
            case U::AddrOf: {
                const Var v = location(*u.operand);
                CType t = v.type;
                ++t.pointer_depth;
                return {v.addr, t};
            }
            case U::BitNot:
            case U::Neg: {
                const Val v = eval(*u.operand);
                if (is_void(v.type) || v.type.is_pointer()) fatal("invalid operand to unary operator", span);
                const CType t = promote(v.type);
                return {u.op == U::BitNot ? ~v.bits : 0u - v.bits, t};
            }
            case U::LogNot: return {truthy(eval(*u.operand), span) ? 0u : 1u, kI32};
            case U::PreInc:
            case U::PreDec:
            case U::PostInc:
            case U::PostDec: {
                const Var loc = location(*u.operand);
                const Val old = load(loc, span);
                const std::uint32_t step = loc.type.is_pointer() ? pointee_size(loc.type) : 1u;
                const bool inc = u.op == U::PreInc || u.op == U::PostInc;
                const Val updated = store(loc, {inc ? old.bits + step : old.bits - step, loc.type}, span);
                return (u.op == U::PreInc || u.op == U::PreDec) ? updated : old;
            }
        }
        fatal("unsupported unary operator", span);
    }

    Val eval_binary(const ast::Binary& b, const SourceSpan& span) {
        if (b.op == ast::BinaryOp::LogAnd) {
            return {truthy(eval(*b.lhs), span) && truthy(eval(*b.rhs), span) ? 1u : 0u, kI32};
        }
        if (b.op == ast::BinaryOp::LogOr) {
            return {truthy(eval(*b.lhs), span) || truthy(eval(*b.rhs), span) ? 1u : 0u, kI32};
        }
        const Val l = eval(*b.lhs);
        const Val r = eval(*b.rhs);
        return arith(b.op, l, r, span);
    }

    Val eval_assign(const ast::Assign& a, const SourceSpan& span) {
        const Var loc = location(*a.target);
        Val v = eval(*a.value);
        if (a.op != ast::AssignOp::Assign) v = arith(binop_of(a.op), load(loc, span), v, span);
        return store(loc, v, span);
    }

    //=== statements and calls ===//

    struct Frame {
        const ast::FunctionDef* fn;
        std::vector<std::map<std::string, Var>> scopes;
        std::optional<Val> ret;
    };

    Val call_function(const std::string& name, const std::vector<Val>& args, const SourceSpan& span) {
        const auto it = functions_.find(name);
        if (it == functions_.end()) fatal("call to undefined function '" + name + "'", span);
        const ast::FunctionDef& fn = *it->second;
        if (fn.params.size() != args.size()) {
            fatal("'" + name + "' expects " + std::to_string(fn.params.size()) + " arguments, got " +
                      std::to_string(args.size()),
                  span);
        }
        if (static_cast<int>(frames_.size()) >= options_.max_call_depth) fatal("call depth limit exceeded", span);
        const std::uint32_t saved_sp = sp_;
        frames_.push_back({&fn, {{}}, std::nullopt});
        for (std::size_t i = 0; i < args.size(); ++i) {
            const Var var{alloc(span), fn.params[i].type};
            store(var, args[i], span);
            frames_.back().scopes.back()[fn.params[i].name] = var;
        }
        exec(*fn.body);
        std::optional<Val> ret = frames_.back().ret;
        frames_.pop_back();
        sp_ = saved_sp;
        if (is_void(fn.return_type)) return {0, kVoid};
        if (!ret) {
            if (no_return_.insert(name).second) {
                diag(Severity::Warning, "control reached the end of non-void function '" + name + "'", &span);
            }
            return {0, fn.return_type};
        }
        return *ret;
    }

    /// True once a return statement has executed.
    bool exec(const ast::Stmt& s) {
        tick(s.span);
        return std::visit(
            ast::overloaded{
                [&](const ast::Compound& c) {
                    auto& frame = frames_.back();
                    const std::uint32_t saved_sp = sp_;
                    frame.scopes.emplace_back();
                    bool returned = false;
                    for (const auto& stmt : c.stmts) {
                        if ((returned = exec(*stmt))) break;
                    }
                    frames_.back().scopes.pop_back();
                    sp_ = saved_sp;
                    return returned;
                },
                [&](const ast::ExprStmt& e) {
                    eval(*e.expr);
                    return false;
                },
                [&](const ast::If& i) {
                    if (truthy(eval(*i.cond), s.span)) return exec(*i.then_branch);
                    return i.else_branch ? exec(*i.else_branch) : false;
                },
                [&](const ast::While& w) {
                    while (truthy(eval(*w.cond), s.span)) {
                        if (exec(*w.body)) return true;
                    }
                    return false;
                },
                [&](const ast::For& f) {
                    const std::uint32_t saved_sp = sp_;
                    frames_.back().scopes.emplace_back();
                    bool returned = false;
                    if (f.init) exec(*f.init);
                    while (!f.cond || truthy(eval(*f.cond), s.span)) {
                        if ((returned = exec(*f.body))) break;
                        if (f.step) eval(*f.step);
                    }
                    frames_.back().scopes.pop_back();
                    sp_ = saved_sp;
                    return returned;
                },
                [&](const ast::Return& r) {
                    auto& frame = frames_.back();
                    if (r.value) {
                        const Val v = eval(*r.value);
                        frame.ret = convert(v, frame.fn->return_type, s.span);
                    } else {
                        frame.ret = Val{0, kVoid};
                    }
                    return true;
                },
                [&](const ast::LocalDecl& d) {
                    const Val init = d.init ? eval(*d.init) : Val{0, d.type};
                    const Var var{alloc(s.span), d.type};
                    store(var, init, s.span);
                    frames_.back().scopes.back()[d.name] = var;
                    return false;
                },
            },
            s.node);
    }

    const BoardMap& board_;
    const Scenario& scenario_;
    const ExecOptions& options_;

    std::map<std::string, const ast::FunctionDef*> functions_;
    std::map<std::string, const ast::Expr*> macros_;
    std::vector<std::pair<const ast::GlobalDecl*, SourceSpan>> global_decls_;
    std::map<std::string, Var> globals_;

    std::map<std::uint32_t, RegInfo> regs_;
    std::map<std::uint32_t, std::uint32_t> mmio_;
    std::vector<Script> scripts_;
    std::vector<std::uint8_t> ram_;
    std::uint32_t global_top_ = kRamBase;
    std::uint32_t sp_ = kStackBase;

    std::vector<Frame> frames_;
    int macro_depth_ = 0;
    std::set<std::string> expanding_;
    std::set<std::string> unclocked_;
    std::set<std::string> dropped_;
    std::set<std::string> no_return_;

    std::string log_;
    std::uint64_t steps_ = 0;
    std::vector<Diagnostic> diagnostics_;
    std::set<std::string> shift_sites_;
};

}  // namespace

ExecResult exec_program(const Project& project, const BoardMap& board, const Scenario& scenario,
                        const ExecOptions& options) {
    scenario.validate();
    const ast::FunctionDef* main_fn = nullptr;
    SourceSpan main_span;
    for (const auto& unit : project.units) {
        for (const auto& item : unit.items) {
            if (const auto* fn = item.as<ast::FunctionDef>(); fn && fn->name == "main") {
                main_fn = fn;
                main_span = item.span;
            }
        }
    }
    if (!main_fn) throw SimSetupError("the project has no main function");
    if (!main_fn->params.empty()) throw SimSetupError("main must not take parameters");
    const auto missing = detect_missing(build_symbol_table(project));
    if (!missing.empty()) {
        std::string names;
        for (const auto& m : missing) names += (names.empty() ? "" : ", ") + m.name;
        throw SimSetupError("the project is not closed; missing: " + names);
    }
    Machine machine(project, board, scenario, options);
    ExecResult result;
    result.state = machine.run(*main_fn, main_span);
    result.verdict = check_scenario(result.state, scenario);
    return result;
}

}  // namespace halgen
