#include <stdint.h>

#define GPIOA_BASE 0x40020000
#define USART2_BASE 0x40004400

uint32_t failures = 0;

void check(uint32_t condition) {
    if (!condition) {
        failures++;
    }
}

// Result line goes out on USART2: "PASS\n" or "FAIL\n".
void report(void) {
    if (failures == 0) {
        usart_send_byte(USART2_BASE, 0x50);
        usart_send_byte(USART2_BASE, 0x41);
        usart_send_byte(USART2_BASE, 0x53);
        usart_send_byte(USART2_BASE, 0x53);
    } else {
        usart_send_byte(USART2_BASE, 0x46);
        usart_send_byte(USART2_BASE, 0x41);
        usart_send_byte(USART2_BASE, 0x49);
        usart_send_byte(USART2_BASE, 0x4C);
    }
    usart_send_byte(USART2_BASE, 0x0A);
}

int main(void) {
    volatile uint32_t *moder = (uint32_t *)(GPIOA_BASE + 0x00);
    volatile uint32_t *odr = (uint32_t *)(GPIOA_BASE + 0x14);

    enable_gpioa_clk();
    set_io_mode(GPIOA_BASE, 0x20, 1);
    set_io_mode(GPIOA_BASE, 0x1, 0);
    check(((*moder >> 10) & 0x3) == 1);
    check((*moder & 0x3) == 0);

    hal_gpio_write(GPIOA_BASE, 0x20, 1);
    check(*odr == 0x20);
    hal_gpio_toggle(GPIOA_BASE, 0x20);
    check(*odr == 0);
    hal_gpio_toggle(GPIOA_BASE, 0x20);
    check(*odr == 0x20);
    hal_gpio_write(GPIOA_BASE, 0x20, 0);
    check(*odr == 0);

    // PA0 is scripted high, then low.
    check(hal_gpio_read(GPIOA_BASE, 0x1) == 1);
    check(hal_gpio_read(GPIOA_BASE, 0x1) == 0);

    hal_gpio_write(GPIOA_BASE, 0x20, 1);
    report();
    return 0;
}
