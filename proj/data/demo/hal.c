#include <stdint.h>

/* Register-level HAL for the STM32F407 GPIOA and USART2 blocks. */

#define RCC_BASE 0x40023800
#define RCC_AHB1ENR_OFFSET 0x30
#define USART_SR_OFFSET 0x00
#define USART_DR_OFFSET 0x04
#define USART_CR1_OFFSET 0x0C
#define USART_FLAG_TXE 0x80

/* Turns on the AHB1 clock for GPIOA. */
void enable_gpioa_clk(void) {
    volatile uint32_t *RCC_AHB1ENR = (uint32_t *)(RCC_BASE + RCC_AHB1ENR_OFFSET);
    *RCC_AHB1ENR |= 0x1;
}

/* mode: 0 input, 1 output, 2 alternate, 3 analog */
void set_io_mode(uint32_t gpio_base, uint32_t pin_mask, uint8_t mode) {
    volatile uint32_t *GPIO_MODER = (uint32_t *)(gpio_base + 0x00);
    uint8_t pin_number = 0;
    while ((pin_mask >> pin_number) != 1) {
        pin_number++;
    }
    *GPIO_MODER &= ~(0x3 << (pin_number * 2));
    *GPIO_MODER |= (mode << (pin_number * 2));
}

void hal_gpio_write(uint32_t gpio_base, uint32_t pin_mask, uint8_t state) {
    volatile uint32_t *GPIO_ODR = (uint32_t *)(gpio_base + 0x14);
    if (state) {
        *GPIO_ODR |= pin_mask;
    } else {
        *GPIO_ODR &= ~pin_mask;
    }
}

uint32_t hal_gpio_read(uint32_t gpio_base, uint32_t pin_mask) {
    volatile uint32_t *GPIO_IDR = (uint32_t *)(gpio_base + 0x10);
    if ((*GPIO_IDR & pin_mask) != 0) {
        return 1;
    }
    return 0;
}

void hal_gpio_toggle(uint32_t gpio_base, uint32_t pin_mask) {
    volatile uint32_t *GPIO_ODR = (uint32_t *)(gpio_base + 0x14);
    *GPIO_ODR ^= pin_mask;
}

/* Blocking transmit of one byte; enables the USART and its transmitter first. */
void usart_send_byte(uint32_t usart_base, uint32_t data) {
    volatile uint32_t *USART_SR = (uint32_t *)(usart_base + USART_SR_OFFSET);
    volatile uint32_t *USART_DR = (uint32_t *)(usart_base + USART_DR_OFFSET);
    volatile uint32_t *USART_CR1 = (uint32_t *)(usart_base + USART_CR1_OFFSET);
    *USART_CR1 |= 0x2008;
    while ((*USART_SR & USART_FLAG_TXE) == 0) {
    }
    *USART_DR = data & 0xFF;
}
